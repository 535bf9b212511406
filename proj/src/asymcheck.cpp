#include "qfreud/asymcheck.hpp"

#include <algorithm>
#include <cmath>

namespace qfreud {

namespace {

double fit_ratio(const std::vector<int>& ns, const std::vector<BigScalar>& ys, double per) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
        if (ys[i].is_zero()) continue;
        double y = ys[i].log_abs();
        sx += ns[i];
        sy += y;
        sxx += double(ns[i]) * ns[i];
        sxy += ns[i] * y;
        ++m;
    }
    if (m < 2) return 0;
    return std::exp(per * (m * sxy - sx * sy) / (m * sxx - sx * sx));
}

BigScalar quarter_power(const BigScalar& q, int n) { return pow(q, BigScalar(n) / BigScalar(4)); }

}  // namespace

BigPoint SampleSet::at(size_t i, int n, const BigScalar& q) const {
    return scaled ? points.at(i) / quarter_power(q, n) : points.at(i);
}

AsymptoticHarness::AsymptoticHarness(const SpecialFunctionSet& sf, int N) : sf_(sf) {
    if (N < 2) throw ConfigError("asymptotic checks need N >= 2");
    const QContext& ctx = sf.ctx();
    seq_ = build_polys(Shift::one(), N, ctx);
    cc_ = solve_connection(sf);
    lc_ = limit_c0_calH(sf);
    auto guard = ctx.scope();
    BigScalar r = quarter_power(ctx.q(), N);
    a_ = make_series_for_radius(SeriesKind::A, BigScalar(4) / r, ctx);
    ainf_ = make_series_for_radius(SeriesKind::AInf, r / BigScalar(4), ctx);
    binf_ = make_series_for_radius(SeriesKind::BInf, r / BigScalar(4), ctx);
}

void AsymptoticHarness::require(int n) const {
    if (n % 2 != 0) throw ConfigError("asymptotic formulas hold for even n only");
    if (n < 2 || n > seq_.N) throw ConfigError("n outside the built polynomial range");
}

BigScalar AsymptoticHarness::near_error(int n, const BigPoint& z) const {
    require(n);
    auto guard = sf_.ctx().scope();
    const BigScalar& q = sf_.ctx().q();
    BigScalar h(n / 2);
    BigScalar scale = pow(q, h * (h - BigScalar(1)));
    if ((n / 2) % 2 != 0) scale = -scale;
    BigPoint k = cc_.mu[1] / cc_.eta[1];
    return abs(seq_.eval(n, z) * scale / (k * a_(z)) - BigPoint(BigScalar(1)));
}

BigScalar AsymptoticHarness::far_error(int n, const BigPoint& z) const {
    require(n);
    auto guard = sf_.ctx().scope();
    const BigScalar& q = sf_.ctx().q();
    BigPoint t = z * pow(q, BigScalar(n) / BigScalar(2));
    return abs(seq_.eval(n, z) / (pow(z, n) * ainf_(t)) - BigPoint(BigScalar(1)));
}

BigScalar AsymptoticHarness::far_error_odd(int n, const BigPoint& z) const {
    require(n);
    auto guard = sf_.ctx().scope();
    const BigScalar& q = sf_.ctx().q();
    BigPoint t = z * pow(q, BigScalar(n) / BigScalar(2));
    BigScalar pre = pow(q, static_cast<long>(n * (n / 2 - 1))) * seq_.gamma[static_cast<size_t>(n) - 1];
    BigPoint c = cc_.mu[3] * lc_.calH * cc_.cPsi;
    return abs(seq_.eval(n - 1, z) * c / (pow(z, n) * binf_(t) * pre) - BigPoint(BigScalar(1)));
}

namespace {

template <class F>
AsymptoticReport run(AsymRegion region, const char* what, const std::vector<int>& ns, const SampleSet& s,
                     const BigScalar& q, F&& err) {
    AsymptoticReport rep;
    rep.region = region;
    rep.quantity = what;
    rep.ns = ns;
    for (int n : ns) {
        std::vector<BigScalar> row;
        BigScalar worst(0);
        for (size_t i = 0; i < s.points.size(); ++i) {
            BigPoint z = s.at(i, n, q);
            BigScalar rim = quarter_power(q, n).is_zero() ? BigScalar(0) : BigScalar(1) / quarter_power(q, n);
            bool inside = !(abs(z) > rim);
            if ((region == AsymRegion::Near) != inside) rep.flags.set(Flag::OutsideDomain);
            row.push_back(err(n, z));
            worst = max(worst, row.back());
        }
        rep.errors.push_back(std::move(row));
        rep.max_error.push_back(worst);
    }
    rep.fitted_ratio = fit_ratio(ns, rep.max_error, 4);
    return rep;
}

}  // namespace

AsymptoticReport AsymptoticHarness::pn_near(const std::vector<int>& ns, const SampleSet& s) const {
    auto guard = sf_.ctx().scope();
    AsymptoticReport r = run(AsymRegion::Near, "P_n", ns, s, sf_.ctx().q(),
                             [&](int n, const BigPoint& z) { return near_error(n, z); });
    r.constant = cc_.mu[1] / cc_.eta[1];
    r.flags |= cc_.flags;
    return r;
}

AsymptoticReport AsymptoticHarness::pn_far(const std::vector<int>& ns, const SampleSet& s) const {
    auto guard = sf_.ctx().scope();
    AsymptoticReport r = run(AsymRegion::Far, "P_n", ns, s, sf_.ctx().q(),
                             [&](int n, const BigPoint& z) { return far_error(n, z); });
    r.constant = BigPoint(BigScalar(1));
    return r;
}

AsymptoticReport AsymptoticHarness::pn1_far(const std::vector<int>& ns, const SampleSet& s) const {
    auto guard = sf_.ctx().scope();
    AsymptoticReport r = run(AsymRegion::Far, "P_{n-1}", ns, s, sf_.ctx().q(),
                             [&](int n, const BigPoint& z) { return far_error_odd(n, z); });
    r.constant = BigPoint(BigScalar(1)) / (cc_.mu[3] * lc_.calH * cc_.cPsi);
    r.flags |= cc_.flags;
    r.flags |= lc_.flags;
    return r;
}

Crossover AsymptoticHarness::crossover(int n, const BigScalar& angle) const {
    require(n);
    auto guard = sf_.ctx().scope();
    BigScalar rim = BigScalar(1) / quarter_power(sf_.ctx().q(), n);
    BigPoint in = polar(rim * BigScalar(0.9), angle), out = polar(rim * BigScalar(1.1), angle);
    return {n, near_error(n, in), far_error(n, out), near_error(n, out), far_error(n, in)};
}

BigScalar band_constant(const AsymptoticReport& r, const BigScalar& q) {
    BigScalar c(0);
    for (size_t i = 0; i < r.ns.size(); ++i) c = max(c, r.max_error[i] / quarter_power(q, r.ns[i]));
    return c;
}

AsymptoticReport check_pn_near(int n, const SampleSet& s, const SpecialFunctionSet& sf) {
    return AsymptoticHarness(sf, n).pn_near({n}, s);
}

AsymptoticReport check_pn_far(int n, const SampleSet& s, const SpecialFunctionSet& sf) {
    return AsymptoticHarness(sf, n).pn_far({n}, s);
}

GammaScaling check_gamma_scaling(const MonicPolySeq& seq, int N, const QContext& ctx) {
    if (N % 2 != 0 || N < 4) throw ConfigError("gamma scaling needs an even N >= 4");
    if (N > seq.N) throw ConfigError("N exceeds the built polynomial range");
    PrecisionScope scope(std::max(seq.precision_used, ctx.precision_bits()));
    const BigScalar& q = ctx.q();
    GammaScaling out;
    std::vector<BigScalar> As, Bs;
    std::vector<int> step_n;
    std::vector<BigScalar> steps;
    out.alpha_gap = BigScalar(0);
    for (int n = 1; n <= N; ++n) {
        const auto i = static_cast<size_t>(n);
        BigScalar r = seq.gamma[i] / seq.gamma[i - 1];
        out.alpha_gap = max(out.alpha_gap, abs(r - seq.alpha[i]) / seq.alpha[i]);
    }
    for (int n = 2; n <= N; n += 2) {
        const auto i = static_cast<size_t>(n);
        BigScalar bn(n);
        GammaRow row;
        row.n = n;
        row.A = seq.gamma[i] * pow(q, bn * (bn - BigScalar(1)) / BigScalar(2));
        row.B = pow(q, bn / BigScalar(2) * (BigScalar(3) - bn)) / seq.gamma[i - 1];
        row.step = out.rows.empty() ? BigScalar(0) : abs(row.A - out.rows.back().A);
        if (!out.rows.empty()) {
            step_n.push_back(n);
            steps.push_back(row.step);
        }
        As.push_back(row.A);
        Bs.push_back(row.B);
        out.rows.push_back(std::move(row));
    }
    out.step_ratio = fit_ratio(step_n, steps, 2);

    // Richardson in the ratio q per step of 2; keep the level whose last two entries agree best.
    std::vector<BigScalar> TA = As, TB = Bs;
    out.A_est = TA.back();
    out.B_est = TB.back();
    BigScalar best(-1);
    for (int lev = 1; TA.size() >= 2; ++lev) {
        BigScalar r = pow(q, static_cast<long>(lev));
        std::vector<BigScalar> na, nb;
        for (size_t i = 0; i + 1 < TA.size(); ++i) {
            na.push_back((TA[i + 1] - r * TA[i]) / (BigScalar(1) - r));
            nb.push_back((TB[i + 1] - r * TB[i]) / (BigScalar(1) - r));
        }
        if (na.size() >= 2) {
            BigScalar gap = abs(na.back() - na[na.size() - 2]) + abs(nb.back() - nb[nb.size() - 2]);
            if (best.sign() < 0 || gap < best) {
                best = gap;
                out.A_est = na.back();
                out.B_est = nb.back();
                out.richardson_level = lev;
            }
        }
        TA = std::move(na);
        TB = std::move(nb);
    }
    out.AB_gap = abs(out.A_est * out.B_est - q);
    return out;
}

GammaScaling check_gamma_scaling(int N, const QContext& ctx) {
    return check_gamma_scaling(build_polys(Shift::one(), N, ctx), N, ctx);
}

}  // namespace qfreud
