#include "qfreud/rhpcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace qfreud {

namespace {

BigPoint one() { return BigPoint(BigScalar(1)); }

ParametrixMatrix make(Region r, BigPoint m00, BigPoint m01, BigPoint m10, BigPoint m11) {
    ParametrixMatrix p;
    p.region = r;
    p.m = {std::move(m00), std::move(m01), std::move(m10), std::move(m11)};
    return p;
}

void check_lattice(const BigPoint& x, const SpecialFunctionSet& sf, Flags& flags) {
    if (sf.lattice_distance(x) < sf.guard_radius()) flags.set(Flag::PoleProximity);
}

BigPoint weight_flagged(const BigPoint& z, const SpecialFunctionSet& sf, Flags& flags) {
    try {
        return sf.weight_w(z);
    } catch (const NumericError&) {
        flags.set(Flag::PoleProximity);
        return sf.weight_w(z, Guard::Off);
    }
}

}  // namespace

ContourSpec ContourSpec::flower(int samples) { return ContourSpec{Shape::Flower, samples}; }
ContourSpec ContourSpec::circle(int samples) { return ContourSpec{Shape::Circle, samples}; }

BigScalar ContourSpec::radius(const BigScalar& theta, const BigScalar& q) const {
    BigScalar e = shape == Shape::Flower ? cos(theta * BigScalar(4)) : BigScalar(1);
    return pow(q, -e / BigScalar(4));
}

std::vector<BigPoint> ContourSpec::points(const QContext& ctx) const {
    if (samples < 1) throw ConfigError("contour needs at least one sample");
    auto guard = ctx.scope();
    std::vector<BigPoint> out;
    out.reserve(static_cast<size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        BigScalar th = pi() * BigScalar(2) * (BigScalar(j) + BigScalar(0.5)) / BigScalar(samples);
        out.push_back(polar(radius(th, ctx.q()), th));
    }
    return out;
}

bool ContourSpec::appropriate(const QContext& ctx) const {
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    auto inside = [&](const BigScalar& r, const BigScalar& th) { return r < radius(th, q); };
    BigScalar quarter = pi() / BigScalar(4);
    for (long k = 0; k <= 8; ++k) {
        BigScalar rk = pow(q, k);
        BigScalar rinv = pow(q, -k);
        for (long m = 0; m < 4; ++m) {
            BigScalar axis = quarter * BigScalar(2 * m);
            BigScalar diag = quarter * BigScalar(2 * m + 1);
            if (!inside(rk, axis)) return false;
            if (k >= 1 && inside(rinv, axis)) return false;
            if (inside(rinv, diag)) return false;
        }
    }
    return true;
}

ParametrixMatrix operator*(const ParametrixMatrix& x, const ParametrixMatrix& y) {
    ParametrixMatrix p;
    p.region = x.region;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) p.at(i, j) = x.at(i, 0) * y.at(0, j) + x.at(i, 1) * y.at(1, j);
    p.flags = x.flags;
    p.flags |= y.flags;
    return p;
}

BigPoint det(const ParametrixMatrix& x) { return x.at(0, 0) * x.at(1, 1) - x.at(0, 1) * x.at(1, 0); }

ParametrixMatrix inverse(const ParametrixMatrix& x) {
    BigPoint d = det(x);
    if (d.is_zero()) throw NumericError(Flag::IllConditioned, "singular parametrix matrix");
    ParametrixMatrix p = make(x.region, x.at(1, 1) / d, -x.at(0, 1) / d, -x.at(1, 0) / d, x.at(0, 0) / d);
    p.flags = x.flags;
    return p;
}

BigScalar deviation_from_identity(const ParametrixMatrix& x) {
    BigScalar d = abs(x.at(0, 0) - one());
    d = max(d, abs(x.at(0, 1)));
    d = max(d, abs(x.at(1, 0)));
    return max(d, abs(x.at(1, 1) - one()));
}

RhpConstants RhpConstants::with_c0_scaled(double factor) const {
    RhpConstants k = *this;
    k.c0 = c0 * BigScalar(factor);
    k.calH = BigScalar(1) / k.c0;
    return k;
}

RhpConstants rhp_constants(const SpecialFunctionSet& sf) {
    ConnectionConstants cc = solve_connection(sf);
    LimitConstants lc = limit_c0_calH(sf);
    auto guard = sf.ctx().scope();
    RhpConstants k;
    k.eta2 = cc.eta[1];
    k.lambda = cc.lambda;
    k.mu2 = cc.mu[1];
    k.mu4 = cc.mu[3];
    k.cPsi = cc.cPsi;
    k.calH = lc.calH;
    k.c0 = lc.c0;
    k.flags = cc.flags;
    k.flags |= lc.flags;
    return k;
}

ParametrixMatrix nearfield_jump(const BigPoint& z, const SpecialFunctionSet& sf) {
    auto guard = sf.ctx().scope();
    Flags f;
    BigPoint g = sf.gfun(z);
    BigPoint w = weight_flagged(z, sf, f);
    ParametrixMatrix p = make(Region::Exterior, one() / g, w * sf.gh(z), BigPoint(), g);
    check_lattice(z, sf, p.flags);
    p.flags |= f;
    return p;
}

Parametrix::Parametrix(const SpecialFunctionSet& sf, RhpConstants k, const BigScalar& rmin, const BigScalar& rmax)
    : sf_(sf), k_(std::move(k)) {
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    a_ = make_series_for_radius(SeriesKind::A, rmax, ctx);
    b_ = make_series_for_radius(SeriesKind::B, rmax, ctx);
    ainf_ = make_series_for_radius(SeriesKind::AInf, rmin, ctx);
    binf_ = make_series_for_radius(SeriesKind::BInf, rmin, ctx);
    psi_odd_ = make_series_for_radius(SeriesKind::PsiOdd, rmax, ctx);
    varpsi_even_ = make_series_for_radius(SeriesKind::VarPsiEven, rmax, ctx);
}

ParametrixMatrix Parametrix::near(const BigPoint& z, Region region) const {
    auto guard = sf_.ctx().scope();
    Flags f;
    BigPoint a = a_(z), b = b_(z);
    BigPoint w = weight_flagged(z, sf_, f);
    const auto& l = k_.lambda;
    ParametrixMatrix p = make(Region::Interior, a / k_.eta2, l[1] / (k_.eta2 * l[0]) * w * b, l[2] * b, l[3] * w * a);
    p.flags = f;
    if (region == Region::Interior) return p;
    ParametrixMatrix ext = p * nearfield_jump(z, sf_);
    ext.region = Region::Exterior;
    return ext;
}

ParametrixMatrix Parametrix::far(const BigPoint& t, Region region) const {
    auto guard = sf_.ctx().scope();
    BigPoint g = sf_.gfun(t);
    BigPoint ai = ainf_(t), bi = binf_(t), po = psi_odd_(t), ve = varpsi_even_(t);
    BigPoint c21 = k_.mu4 * k_.calH * k_.cPsi;
    BigPoint m01 = k_.mu2 * k_.calH * po;
    BigPoint m11 = ve / k_.cPsi;
    ParametrixMatrix p = region == Region::Interior ? make(region, ai / g, m01, bi / (g * c21), m11)
                                                    : make(region, ai, m01 / g, bi / c21, m11 / g);
    check_lattice(t, sf_, p.flags);
    return p;
}

ParametrixMatrix nearfield_eval(const BigPoint& z, Region region, const RhpConstants& k, const SpecialFunctionSet& sf) {
    auto guard = sf.ctx().scope();
    BigScalar r = abs(z);
    return Parametrix(sf, k, r, r).near(z, region);
}

ParametrixMatrix farfield_eval(const BigPoint& t, Region region, const RhpConstants& k, const SpecialFunctionSet& sf) {
    auto guard = sf.ctx().scope();
    BigScalar r = abs(t);
    return Parametrix(sf, k, r, r).far(t, region);
}

GlueResult glue_residual(int n, const ContourSpec& contour, const RhpConstants& k, const SpecialFunctionSet& sf) {
    if (n < 4 || n % 2 != 0) throw ConfigError("glue residual needs an even n >= 4");
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    BigScalar up = pow(q, -BigScalar(n) / BigScalar(4));
    BigScalar down = BigScalar(1) / up;
    std::vector<BigPoint> s = contour.points(ctx);
    BigScalar smin = abs(s[0]), smax = abs(s[0]);
    for (const auto& x : s) {
        smin = min(smin, abs(x));
        smax = max(smax, abs(x));
    }
    Parametrix par(sf, k, smin * down, smax * up);
    BigScalar q4 = pow(q, 4L);

    GlueResult out;
    out.n = n;
    out.residual = BigScalar(0);
    for (const auto& sj : s) {
        BigPoint z = sj * up, t = sj * down;
        ParametrixMatrix W = par.near(z, Region::Exterior);
        W.at(0, 0) *= k.mu2;
        W.at(0, 1) *= k.mu2;
        W.at(1, 0) /= k.cPsi;
        W.at(1, 1) /= k.cPsi;
        ParametrixMatrix C = par.far(t, Region::Interior);
        BigPoint fac = pochhammer_inf(-(BigPoint(q4) / pow(z, 4)), q4, ctx);
        C.at(0, 1) *= fac;
        C.at(1, 1) *= fac;
        ParametrixMatrix J = inverse(W) * C;
        BigScalar d = deviation_from_identity(J);
        out.flags |= J.flags;
        if (d > out.residual) {
            out.residual = d;
            out.worst_sample = sj;
        }
    }
    return out;
}

GlueTable glue_table(const std::vector<int>& ns, const ContourSpec& contour, const RhpConstants& k,
                     const SpecialFunctionSet& sf) {
    GlueTable tab;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n : ns) {
        GlueResult r = glue_residual(n, contour, k, sf);
        GlueRow row{n, r.residual, 0};
        if (!tab.rows.empty()) row.ratio = (r.residual / tab.rows.back().residual).to_double();
        tab.flags |= r.flags;
        double y = r.residual.log_abs();
        sx += n;
        sy += y;
        sxx += double(n) * n;
        sxy += n * y;
        tab.rows.push_back(std::move(row));
    }
    const double m = static_cast<double>(ns.size());
    if (ns.size() >= 2) {
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        tab.fitted_ratio = std::exp(4 * slope);
    }
    return tab;
}

}  // namespace qfreud
