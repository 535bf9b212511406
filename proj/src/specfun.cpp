#include "qfreud/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace qfreud {

namespace {

const double kLn2 = 0.69314718055994530942;

BigPoint one() { return BigPoint(BigScalar(1)); }

// Distance from x to the nearest point e^{iπ(2n+1)/4}·q^j, j in [jmin, jmax].
BigScalar diagonal_distance(const BigPoint& x, const BigScalar& q, long jmin, long jmax) {
    double lq = q.log_abs();
    double jc = x.log_abs() / lq;
    BigScalar best(-1);
    BigScalar quarter = pi() / BigScalar(4);
    BigScalar a = arg(x);
    double nd = std::floor((a / quarter).to_double());
    for (long j = static_cast<long>(std::floor(jc)) - 1; j <= static_cast<long>(std::ceil(jc)) + 1; ++j) {
        if (j < jmin || j > jmax) continue;
        BigScalar rho = pow(q, j);
        for (long n = static_cast<long>(nd) - 2; n <= static_cast<long>(nd) + 2; ++n) {
            if (n % 2 == 0) continue;
            BigScalar d = abs(x - polar(rho, quarter * BigScalar(n)));
            if (best.sign() < 0 || d < best) best = d;
        }
    }
    return best.sign() < 0 ? BigScalar(1) : best;
}

}  // namespace

SpecialFunctionSet::SpecialFunctionSet(const QContext& ctx) : ctx_(ctx) {
    auto guard = ctx_.scope();
    const BigScalar& q = ctx_.q();
    q2_ = q * q;
    q4_ = q2_ * q2_;
    guard_ = sqrt(ctx_.trunc_tol()) * BigScalar(10);
    c1_ = BigScalar(1);

    BigPoint zs = polar(BigScalar(0.4), pi() / BigScalar(8));
    BigPoint ratio = hq_series(zs, Guard::Off) / hq_product_raw(zs);
    c1_ = ratio.re;
    c1_spread_ = abs(ratio.im) / abs(c1_);
    // ten check points spread over the annulus q < |z| < 1, off every singular ray
    for (int j = 0; j < 10; ++j) {
        BigScalar r = q + (BigScalar(1) - q) * BigScalar(0.07 + 0.09 * j);
        BigScalar th = pi() * BigScalar(0.11 + 0.173 * j);
        BigPoint z = polar(r, th);
        BigPoint c = hq_series(z, Guard::Off) / hq_product_raw(z);
        BigScalar dev = abs(c - BigPoint(c1_)) / abs(c1_);
        c1_spread_ = max(c1_spread_, dev);
    }
}

BigScalar SpecialFunctionSet::lattice_distance(const BigPoint& z) const {
    auto guard = ctx_.scope();
    const BigScalar& q = ctx_.q();
    double kc = z.log_abs() / q.log_abs();
    BigScalar best = abs(z);
    for (long k = static_cast<long>(std::floor(kc)) - 1; k <= static_cast<long>(std::ceil(kc)) + 1; ++k) {
        BigScalar p = pow(q, k);
        best = min(best, abs(z - BigPoint(p)));
        best = min(best, abs(z + BigPoint(p)));
    }
    return best;
}

BigPoint SpecialFunctionSet::hq_series(const BigPoint& z, Guard guard) const {
    auto scope = ctx_.scope();
    if (z.is_zero()) throw NumericError(Flag::OutsideDomain, "h_q at z = 0");
    if (guard == Guard::On && lattice_distance(z) < guard_)
        throw NumericError(Flag::PoleProximity, "h_q evaluated within guard radius of a pole");
    const BigScalar& q = ctx_.q();
    const double lq = q.log_abs();
    const double lz = z.log_abs();
    const double ltol = ctx_.log_trunc_tol() - 10 * kLn2;
    const double l1q = std::log1p(-q.to_double());
    long khi = static_cast<long>(std::max(std::ceil((lz - kLn2) / lq),
                                          std::ceil((ltol + lz + l1q + std::log(0.75) - kLn2) / lq))) + 1;
    long klo = static_cast<long>(std::min(std::floor((lz + kLn2) / lq),
                                          -std::ceil((ltol - lz - kLn2 + std::log(0.75) + l1q) / lq))) - 1;
    BigPoint z2 = z * z;
    BigPoint twoz = z * BigScalar(2);
    BigScalar qk = pow(q, klo);
    BigPoint sum;
    for (long k = klo; k <= khi; ++k) {
        sum += twoz * qk / (z2 - BigPoint(qk * qk));
        qk *= q;
    }
    return sum;
}

BigPoint SpecialFunctionSet::hq_product_raw(const BigPoint& z) const {
    const BigScalar& q = ctx_.q();
    BigPoint z2 = z * z;
    BigPoint iz2 = one() / z2;
    BigPoint num = pochhammer_inf(z2 * q, q2_, ctx_) * pochhammer_inf(iz2 * q, q2_, ctx_);
    BigPoint den = pochhammer_inf(z2, q2_, ctx_) * pochhammer_inf(iz2 * q2_, q2_, ctx_);
    return z * num / den;
}

BigPoint SpecialFunctionSet::hq_product(const BigPoint& z, Guard guard) const {
    auto scope = ctx_.scope();
    if (z.is_zero()) throw NumericError(Flag::OutsideDomain, "h_q at z = 0");
    if (guard == Guard::On && lattice_distance(z) < guard_)
        throw NumericError(Flag::PoleProximity, "h_q evaluated within guard radius of a pole");
    return hq_product_raw(z) * c1_;
}

BigPoint SpecialFunctionSet::gh(const BigPoint& z) const {
    auto scope = ctx_.scope();
    if (z.is_zero()) throw NumericError(Flag::OutsideDomain, "g·h_q at z = 0");
    const BigScalar& q = ctx_.q();
    BigPoint z2 = z * z;
    return z * pochhammer_inf(z2 * q, q2_, ctx_) * pochhammer_inf(one() / z2 * q, q2_, ctx_) * c1_;
}

BigScalar SpecialFunctionSet::weight_w(const BigScalar& x) const {
    auto scope = ctx_.scope();
    BigScalar x2 = x * x;
    return BigScalar(1) / pochhammer_inf(-(x2 * x2), q4_, ctx_);
}

BigPoint SpecialFunctionSet::weight_w(const BigPoint& x, Guard guard) const {
    auto scope = ctx_.scope();
    if (guard == Guard::On && diagonal_distance(x, ctx_.q(), -1000000, 0) < guard_)
        throw NumericError(Flag::PoleProximity, "w evaluated within guard radius of a pole");
    BigPoint x4 = pow(x, 4);
    return one() / pochhammer_inf(-x4, q4_, ctx_);
}

BigPoint SpecialFunctionSet::gfun(const BigPoint& z) const {
    auto scope = ctx_.scope();
    if (z.is_zero()) throw NumericError(Flag::OutsideDomain, "g at z = 0");
    BigPoint z2 = z * z;
    return pochhammer_inf(z2, q2_, ctx_) * pochhammer_inf(one() / z2 * q2_, q2_, ctx_);
}

BigPoint SpecialFunctionSet::omegafun(const BigPoint& t, Guard guard) const {
    auto scope = ctx_.scope();
    if (t.is_zero()) throw NumericError(Flag::OutsideDomain, "omega at t = 0");
    if (guard == Guard::On && diagonal_distance(t, ctx_.q(), -1000000, 1000000) < guard_)
        throw NumericError(Flag::PoleProximity, "omega evaluated within guard radius of a pole");
    BigPoint t4 = pow(t, 4);
    return one() / (pochhammer_inf(-t4, q4_, ctx_) * pochhammer_inf(-(one() / t4) * q4_, q4_, ctx_));
}

BigPoint hq_series(const BigPoint& z, const QContext& ctx) { return SpecialFunctionSet(ctx).hq_series(z); }
BigPoint hq_product(const BigPoint& z, const QContext& ctx) { return SpecialFunctionSet(ctx).hq_product(z); }

BigPoint weight_w(const BigPoint& x, const QContext& ctx) {
    auto scope = ctx.scope();
    BigScalar q4 = pow(ctx.q(), 4);
    return one() / pochhammer_inf(-pow(x, 4), q4, ctx);
}

BigPoint gfun(const BigPoint& z, const QContext& ctx) {
    auto scope = ctx.scope();
    if (z.is_zero()) throw NumericError(Flag::OutsideDomain, "g at z = 0");
    BigScalar q2 = ctx.q() * ctx.q();
    BigPoint z2 = z * z;
    return pochhammer_inf(z2, q2, ctx) * pochhammer_inf(one() / z2 * q2, q2, ctx);
}

BigPoint omegafun(const BigPoint& t, const QContext& ctx) {
    auto scope = ctx.scope();
    if (t.is_zero()) throw NumericError(Flag::OutsideDomain, "omega at t = 0");
    BigScalar q4 = pow(ctx.q(), 4);
    BigPoint t4 = pow(t, 4);
    return one() / (pochhammer_inf(-t4, q4, ctx) * pochhammer_inf(-(one() / t4) * q4, q4, ctx));
}

LimitConstants limit_c0_calH(const SpecialFunctionSet& sf) {
    const QContext& ctx = sf.ctx();
    auto scope = ctx.scope();
    const BigScalar& q = ctx.q();
    LimitConstants out;

    auto gh_split = [&](const BigPoint& z) { return sf.gfun(z) * sf.hq_series(z, Guard::Off); };

    // c0(k) = 1/(g²wh²)(q^{-k}); the error decays like q^{4k}.
    const BigScalar stop = ctx.trunc_tol() / BigScalar(16);
    const int kmax = static_cast<int>(std::ceil(ctx.log_trunc_tol() / (4 * q.log_abs()))) + 40;
    BigScalar prev;
    bool converged = false;
    for (int k = 1; k <= kmax; ++k) {
        BigScalar x = pow(q, static_cast<long>(-k));
        BigPoint v = lattice_limit(gh_split, BigPoint(x), ctx).value;
        BigScalar c0 = BigScalar(1) / ((v * v).re * sf.weight_w(x));
        if (k > 1) {
            BigScalar step = abs(c0 - prev);
            out.c0_steps.push_back(step);
            if (step < stop * abs(c0)) {
                out.c0 = c0;
                out.k_used = k;
                converged = true;
                break;
            }
        }
        prev = c0;
    }
    if (!converged) {
        out.c0 = prev;
        out.k_used = kmax;
        out.flags.set(Flag::NonConvergence);
    }

    LatticeLimit at_q = lattice_limit(gh_split, BigPoint(q), ctx);
    BigScalar om = sf.omegafun(BigPoint(q)).re;
    out.calH = om * (at_q.value * at_q.value).re;
    BigScalar coarse = om * (at_q.coarse * at_q.coarse).re;
    BigScalar fine = om * (at_q.fine * at_q.fine).re;
    out.calH_offset_gap = abs(coarse - fine);
    out.product = out.c0 * out.calH;
    return out;
}

LimitConstants limit_c0_calH(const QContext& ctx) { return limit_c0_calH(SpecialFunctionSet(ctx)); }

std::vector<RayPoint> hq_ray_scan(const std::vector<BigScalar>& r_grid, const BigScalar& angle,
                                  const SpecialFunctionSet& sf) {
    auto scope = sf.ctx().scope();
    std::vector<RayPoint> rows;
    rows.reserve(r_grid.size());
    for (const auto& r : r_grid) {
        BigPoint h = sf.hq_series(polar(r, angle));
        rows.push_back({r, h.re, h.im});
    }
    return rows;
}

}  // namespace qfreud
