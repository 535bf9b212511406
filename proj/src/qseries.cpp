#include "qfreud/qseries.hpp"

#include <algorithm>
#include <cmath>

namespace qfreud {

const char* series_name(SeriesKind k) {
    switch (k) {
        case SeriesKind::A: return "a";
        case SeriesKind::B: return "b";
        case SeriesKind::PhiEven: return "phi_even";
        case SeriesKind::PhiOdd: return "phi_odd";
        case SeriesKind::VarphiEven: return "varphi_even";
        case SeriesKind::VarphiOdd: return "varphi_odd";
        case SeriesKind::AInf: return "a_inf";
        case SeriesKind::BInf: return "b_inf";
        case SeriesKind::PsiEven: return "Psi_even";
        case SeriesKind::PsiOdd: return "Psi_odd";
        case SeriesKind::VarPsiEven: return "varPsi_even";
        case SeriesKind::VarPsiOdd: return "varPsi_odd";
    }
    return "?";
}

Expansion expansion_of(SeriesKind k) {
    switch (k) {
        case SeriesKind::A:
        case SeriesKind::B:
        case SeriesKind::PsiEven:
        case SeriesKind::PsiOdd:
        case SeriesKind::VarPsiEven:
        case SeriesKind::VarPsiOdd: return Expansion::AscendingAtZero;
        default: return Expansion::DescendingAtInfinity;
    }
}

Parity parity_of(SeriesKind k) {
    switch (k) {
        case SeriesKind::A:
        case SeriesKind::PhiEven:
        case SeriesKind::VarphiEven:
        case SeriesKind::AInf:
        case SeriesKind::PsiEven:
        case SeriesKind::VarPsiEven: return Parity::Even;
        default: return Parity::Odd;
    }
}

Validity validity_of(SeriesKind k) {
    if (expansion_of(k) == Expansion::AscendingAtZero) return Validity::Entire;
    if (k == SeriesKind::VarphiEven || k == SeriesKind::VarphiOdd) return Validity::OutsideDiskQ;
    return Validity::Punctured;
}

Equation equation_of(SeriesKind k) {
    switch (k) {
        case SeriesKind::A:
        case SeriesKind::B: return Equation::NearZero;
        case SeriesKind::PhiEven:
        case SeriesKind::PhiOdd: return Equation::VDiff;
        case SeriesKind::VarphiEven:
        case SeriesKind::VarphiOdd: return Equation::UDiff;
        case SeriesKind::AInf: return Equation::NearInf;
        case SeriesKind::BInf: return Equation::NearInf2;
        case SeriesKind::PsiEven:
        case SeriesKind::PsiOdd: return Equation::VInf;
        case SeriesKind::VarPsiEven:
        case SeriesKind::VarPsiOdd: return Equation::VInf2;
    }
    return Equation::NearZero;
}

namespace {

int seed_index(SeriesKind k) { return parity_of(k) == Parity::Even ? 0 : 1; }

// y_i from y_{i-2}, y_{i-4}; q-powers passed in precomputed.
class Recurrence {
public:
    Recurrence(SeriesKind kind, const BigScalar& q) : kind_(kind), q_(q), one_(1) {}

    BigScalar next(int i, const BigScalar& y2, const BigScalar& y4) const {
        const BigScalar& q = q_;
        BigScalar qi = pow(q, static_cast<long>(i));
        BigScalar iqi = one_ / qi;
        BigScalar num, den;
        switch (kind_) {
            case SeriesKind::A:
            case SeriesKind::B:
                num = (one_ + one_ / q) * iqi * y2 + pow(q, -4L) * y4;
                den = q * iqi * iqi - (one_ + q) * iqi + one_;
                break;
            case SeriesKind::PhiEven:
            case SeriesKind::PhiOdd:
                num = q * (one_ + q) * qi * y2 + qi * qi * y4;
                den = q - (one_ + q) * qi + qi * qi;
                break;
            case SeriesKind::VarphiEven:
            case SeriesKind::VarphiOdd:
                num = (one_ + q) * qi * q * y2 + pow(q, 5L) * y4;
                den = q - (one_ + q) * qi + qi * qi;
                break;
            case SeriesKind::AInf:
                num = (one_ + q) * qi * y2 + qi * qi / q * y4;
                den = one_ - qi;
                break;
            case SeriesKind::BInf:
                num = (one_ + q) * qi * y2 + qi * qi / q * y4;
                den = one_ - qi / q;
                break;
            case SeriesKind::PsiEven:
            case SeriesKind::PsiOdd:
                num = iqi * y2;
                den = one_ - (one_ + q) * iqi + q * iqi * iqi;
                break;
            case SeriesKind::VarPsiEven:
            case SeriesKind::VarPsiOdd:
                num = iqi / q * y2;
                den = one_ - (one_ + q) * iqi + q * iqi * iqi;
                break;
        }
        if (den.is_zero()) throw NumericError(Flag::VanishingDenominator, "series recurrence denominator vanished");
        return -num / den;
    }

private:
    SeriesKind kind_;
    BigScalar q_;
    BigScalar one_;
};

// log |term i| at radius r, for a coefficient c_i.
double log_term(const BigScalar& c, int i, double log_r, Expansion e) {
    double lc = c.log_abs();
    return e == Expansion::AscendingAtZero ? lc + i * log_r : lc - i * log_r;
}

}  // namespace

PowerSeries::PowerSeries(SeriesKind kind, std::vector<BigScalar> coeffs, BigScalar q, BigScalar tail_tol)
    : kind_(kind), coeffs_(std::move(coeffs)), q_(std::move(q)), tol_(std::move(tail_tol)) {}

bool PowerSeries::in_domain(const BigPoint& z) const {
    switch (validity()) {
        case Validity::Entire: return true;
        case Validity::Punctured: return !z.is_zero();
        case Validity::OutsideDiskQ: return abs(z) > q_;
    }
    return false;
}

SeriesValue PowerSeries::eval_checked(const BigPoint& z, const BigScalar& tol) const {
    SeriesValue out;
    if (!in_domain(z)) out.flags.set(Flag::OutsideDomain);
    if (z.is_zero() && expansion() == Expansion::DescendingAtInfinity) {
        out.flags.set(Flag::OutsideDomain);
        return out;
    }
    BigPoint x = expansion() == Expansion::AscendingAtZero ? z : BigPoint(BigScalar(1)) / z;
    BigPoint x2 = x * x;
    const int s = seed_index(kind_);
    BigPoint p = s == 0 ? BigPoint(BigScalar(1)) : x;
    BigPoint sum;
    // the recurrence couples steps of two and four, so compare pairs of terms
    BigScalar biggest(0), m3(0), m2(0), prev_mag(0), last_mag(0);
    for (size_t i = static_cast<size_t>(s); i < coeffs_.size(); i += 2) {
        BigPoint term = p * coeffs_[i];
        sum += term;
        m3 = m2;
        m2 = prev_mag;
        prev_mag = last_mag;
        last_mag = abs(term);
        biggest = max(biggest, last_mag);
        p *= x2;
    }
    if (biggest.is_zero()) {
        out.value = sum;
        out.last_term = BigScalar(0);
        return out;
    }
    out.last_term = max(last_mag, prev_mag) / biggest;
    if (out.last_term > tol || (!m3.is_zero() && max(last_mag, prev_mag) >= max(m2, m3))) out.flags.set(Flag::TailRatio);
    out.value = sum;
    return out;
}

BigPoint PowerSeries::operator()(const BigPoint& z) const {
    SeriesValue v = eval_checked(z, tol_);
    if (v.flags.has(Flag::OutsideDomain))
        throw NumericError(Flag::OutsideDomain, std::string(series_name(kind_)) + " evaluated outside its domain");
    if (v.flags.has(Flag::TailRatio))
        throw NumericError(Flag::TailRatio, std::string(series_name(kind_)) + " truncated too early");
    return v.value;
}

int default_order(const QContext& ctx) {
    return static_cast<int>(std::ceil(ctx.log_trunc_tol() / ctx.q().log_abs())) + 8;
}

PowerSeries make_series(SeriesKind kind, int M, const QContext& ctx) {
    if (M < 4) throw std::invalid_argument("series order must be at least 4");
    auto guard = ctx.scope();
    Recurrence rec(kind, ctx.q());
    std::vector<BigScalar> c(static_cast<size_t>(M) + 1, BigScalar(0));
    const int s = seed_index(kind);
    c[static_cast<size_t>(s)] = BigScalar(1);
    for (int i = s + 2; i <= M; i += 2) {
        BigScalar y4 = i >= 4 ? c[static_cast<size_t>(i - 4)] : BigScalar(0);
        c[static_cast<size_t>(i)] = rec.next(i, c[static_cast<size_t>(i - 2)], y4);
    }
    return PowerSeries(kind, std::move(c), ctx.q(), ctx.trunc_tol());
}

PowerSeries make_series_for_radius(SeriesKind kind, const BigScalar& radius, const QContext& ctx) {
    auto guard = ctx.scope();
    if (validity_of(kind) == Validity::OutsideDiskQ && !(radius > ctx.q()))
        throw NumericError(Flag::OutsideDomain, std::string(series_name(kind)) + " does not converge at this radius");
    Recurrence rec(kind, ctx.q());
    const Expansion e = expansion_of(kind);
    const double lr = radius.log_abs();
    const double target = ctx.log_trunc_tol() - 12 * 0.6931471805599453;
    const int s = seed_index(kind);
    const int floor_order = default_order(ctx);
    const int cap = 200000;
    std::vector<BigScalar> c;
    c.reserve(static_cast<size_t>(floor_order) + 2);
    c.push_back(s == 0 ? BigScalar(1) : BigScalar(0));
    c.push_back(s == 1 ? BigScalar(1) : BigScalar(0));
    double peak = log_term(c[static_cast<size_t>(s)], s, lr, e);
    int small_run = 0;
    int i = 2;
    for (;; ++i) {
        if (i > cap) throw NumericError(Flag::NonConvergence, "series order cap reached");
        if ((i - s) % 2 != 0) {
            c.push_back(BigScalar(0));
            continue;
        }
        BigScalar y4 = i >= 4 ? c[static_cast<size_t>(i - 4)] : BigScalar(0);
        c.push_back(rec.next(i, c[static_cast<size_t>(i - 2)], y4));
        double lt = log_term(c.back(), i, lr, e);
        peak = std::max(peak, lt);
        small_run = (lt < peak + target) ? small_run + 1 : 0;
        if (small_run >= 4 && i >= floor_order) break;
    }
    return PowerSeries(kind, std::move(c), ctx.q(), ctx.trunc_tol());
}

SeriesBank make_bank(const BigScalar& rmin, const BigScalar& rmax, const QContext& ctx) {
    auto guard = ctx.scope();
    SeriesBank b;
    b.rmin = rmin;
    b.rmax = rmax;
    auto mk = [&](SeriesKind k) {
        return make_series_for_radius(k, expansion_of(k) == Expansion::AscendingAtZero ? rmax : rmin, ctx);
    };
    b.a = mk(SeriesKind::A);
    b.b = mk(SeriesKind::B);
    b.phi_even = mk(SeriesKind::PhiEven);
    b.phi_odd = mk(SeriesKind::PhiOdd);
    if (rmin > ctx.q()) {
        b.varphi_even = mk(SeriesKind::VarphiEven);
        b.varphi_odd = mk(SeriesKind::VarphiOdd);
    }
    b.a_inf = mk(SeriesKind::AInf);
    b.b_inf = mk(SeriesKind::BInf);
    b.psi_even = mk(SeriesKind::PsiEven);
    b.psi_odd = mk(SeriesKind::PsiOdd);
    b.varpsi_even = mk(SeriesKind::VarPsiEven);
    b.varpsi_odd = mk(SeriesKind::VarPsiOdd);
    return b;
}

SeriesPair series_ab(int M, const QContext& ctx) {
    return {make_series(SeriesKind::A, M, ctx), make_series(SeriesKind::B, M, ctx)};
}

SeriesPair series_phi(int M, const QContext& ctx) {
    return {make_series(SeriesKind::PhiEven, M, ctx), make_series(SeriesKind::PhiOdd, M, ctx)};
}

SeriesPair series_varphi(int M, const QContext& ctx) {
    return {make_series(SeriesKind::VarphiEven, M, ctx), make_series(SeriesKind::VarphiOdd, M, ctx)};
}

SeriesPair series_farfield(int M, const QContext& ctx) {
    return {make_series(SeriesKind::AInf, M, ctx), make_series(SeriesKind::BInf, M, ctx)};
}

std::array<PowerSeries, 4> series_Psi(int M, const QContext& ctx) {
    return {make_series(SeriesKind::PsiEven, M, ctx), make_series(SeriesKind::PsiOdd, M, ctx),
            make_series(SeriesKind::VarPsiEven, M, ctx), make_series(SeriesKind::VarPsiOdd, M, ctx)};
}

CPsiEstimate estimate_cPsi(const SpecialFunctionSet& sf) {
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    CPsiEstimate out;
    const int jmax = 24;
    BigScalar angle = pi() / BigScalar(8);
    BigScalar rmax = pow(q, -BigScalar(jmax) - BigScalar(0.5));
    PowerSeries vpe = make_series_for_radius(SeriesKind::VarPsiEven, rmax, ctx);
    std::vector<BigPoint> est;
    out.min_lattice_distance = BigScalar(-1);
    for (int j = 0; j <= jmax; ++j) {
        BigPoint t = polar(pow(q, -BigScalar(j) - BigScalar(0.5)), angle);
        BigScalar d = sf.lattice_distance(t);
        if (out.min_lattice_distance.sign() < 0 || d < out.min_lattice_distance) out.min_lattice_distance = d;
        est.push_back(vpe(t) / sf.gfun(t));
        out.raw.push_back(est.back().re);
        out.imag_parts.push_back(est.back().im);
    }
    // corrections are powers of 1/t, i.e. of q^j along the ray: eliminate q^1, q^2, ... in turn
    std::vector<BigPoint> col = est;
    BigPoint best = col.back();
    BigScalar best_gap(-1);
    for (int lev = 1; lev < static_cast<int>(est.size()) - 1; ++lev) {
        BigScalar r = pow(q, static_cast<long>(lev));
        std::vector<BigPoint> nxt;
        for (size_t i = 0; i + 1 < col.size(); ++i)
            nxt.push_back((col[i + 1] - col[i] * r) / (BigScalar(1) - r));
        BigScalar gap = abs(nxt.back() - col.back());
        if (best_gap.sign() < 0 || gap < best_gap) {
            best_gap = gap;
            best = nxt.back();
        }
        col.swap(nxt);
        if (col.size() < 2) break;
    }
    out.value = best.re;
    out.error_estimate = max(best_gap, abs(best.im));
    double ratio_sum = 0;
    int cnt = 0;
    for (size_t i = est.size() - 6; i + 1 < est.size(); ++i) {
        BigScalar d1 = abs(est[i] - est[i - 1]), d2 = abs(est[i + 1] - est[i]);
        ratio_sum += (d2 / d1).to_double();
        ++cnt;
    }
    out.decay_ratio = ratio_sum / cnt;
    if (out.error_estimate > ctx.trunc_tol() * abs(out.value) * BigScalar(1e6)) out.flags.set(Flag::NonConvergence);
    return out;
}

CPsiEstimate estimate_cPsi(const QContext& ctx) { return estimate_cPsi(SpecialFunctionSet(ctx)); }

std::array<BigPoint, 3> default_sample_points(const QContext& ctx) {
    auto guard = ctx.scope();
    return {polar(BigScalar(2), pi() / BigScalar(12)), polar(BigScalar(3), pi() / BigScalar(6)),
            BigPoint(BigScalar(1.7), BigScalar(-0.9))};
}

namespace {

struct Solve2 {
    BigPoint x1, x2;
    BigScalar condition;
};

// [b1(z1) b2(z1); b1(z2) b2(z2)] x = [f(z1); f(z2)] by Cramer's rule.
Solve2 solve2(const BigPoint& f1, const BigPoint& f2, const BigPoint& a11, const BigPoint& a12, const BigPoint& a21,
              const BigPoint& a22) {
    BigPoint det = a11 * a22 - a12 * a21;
    Solve2 s;
    s.x1 = (f1 * a22 - a12 * f2) / det;
    s.x2 = (a11 * f2 - f1 * a21) / det;
    BigScalar n = max(abs(a11) + abs(a12), abs(a21) + abs(a22));
    BigScalar ninv = max(abs(a22) + abs(a12), abs(a21) + abs(a11)) / abs(det);
    s.condition = n * ninv;
    return s;
}

}  // namespace

ConnectionConstants solve_connection(const std::array<BigPoint, 3>& pts, const SpecialFunctionSet& sf,
                                     const SeriesBank& bank) {
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    ConnectionConstants cc;
    cc.sample_points = {pts[0], pts[1]};
    cc.held_out = pts[2];
    for (const auto& z : pts) {
        if (!(abs(z) > ctx.q())) throw NumericError(Flag::OutsideDomain, "sample point inside |z| <= q");
        if (sf.lattice_distance(z) < sf.guard_radius())
            throw NumericError(Flag::PoleProximity, "sample point on the lattice");
    }

    struct At {
        BigPoint h, g, w, a, b, phe, pho, vpe, vpo, ainf, binf, pse, pso, vse, vso;
    };
    auto at = [&](const BigPoint& z) {
        At v;
        v.h = sf.hq_series(z);
        v.g = sf.gfun(z);
        v.w = sf.weight_w(z);
        v.a = bank.a(z);
        v.b = bank.b(z);
        v.phe = bank.phi_even(z);
        v.pho = bank.phi_odd(z);
        v.vpe = bank.varphi_even(z);
        v.vpo = bank.varphi_odd(z);
        v.ainf = bank.a_inf(z);
        v.binf = bank.b_inf(z);
        v.pse = bank.psi_even(z);
        v.pso = bank.psi_odd(z);
        v.vse = bank.varpsi_even(z);
        v.vso = bank.varpsi_odd(z);
        return v;
    };
    std::array<At, 3> v = {at(pts[0]), at(pts[1]), at(pts[2])};

    // Each relation: target f = x1·b1 + x2·b2.
    using Fn = BigPoint (*)(const At&);
    struct Rel {
        Fn f, b1, b2;
    };
    const Rel rels[6] = {
        {[](const At& s) { return s.a / s.g; }, [](const At& s) { return s.h * s.vpo; },
         [](const At& s) { return s.vpe; }},
        {[](const At& s) { return s.b / s.g; }, [](const At& s) { return s.vpo; },
         [](const At& s) { return s.h * s.vpe; }},
        {[](const At& s) { return s.phe; }, [](const At& s) { return s.g * s.w * s.h * s.b; },
         [](const At& s) { return s.g * s.w * s.a; }},
        {[](const At& s) { return s.pho; }, [](const At& s) { return s.g * s.w * s.h * s.a; },
         [](const At& s) { return s.g * s.w * s.b; }},
        {[](const At& s) { return s.ainf / s.g; }, [](const At& s) { return s.h * s.pso; },
         [](const At& s) { return s.pse; }},
        {[](const At& s) { return s.binf / s.g; }, [](const At& s) { return s.vso; },
         [](const At& s) { return s.h * s.vse; }},
    };
    std::array<Solve2, 6> sol;
    for (int r = 0; r < 6; ++r) {
        const Rel& R = rels[r];
        sol[static_cast<size_t>(r)] = solve2(R.f(v[0]), R.f(v[1]), R.b1(v[0]), R.b2(v[0]), R.b1(v[1]), R.b2(v[1]));
        const Solve2& s = sol[static_cast<size_t>(r)];
        BigPoint target = R.f(v[2]);
        BigPoint fit = s.x1 * R.b1(v[2]) + s.x2 * R.b2(v[2]);
        cc.residuals[static_cast<size_t>(r)] = abs(target - fit) / abs(target);
        cc.condition[static_cast<size_t>(r)] = s.condition;
        if (s.condition > BigScalar(1e6)) cc.flags.set(Flag::IllConditioned);
    }
    cc.eta = {sol[0].x1, sol[0].x2, sol[1].x1, sol[1].x2};
    cc.lambda = {sol[3].x1, sol[3].x2, sol[2].x1, sol[2].x2};
    cc.mu = {sol[4].x1, sol[4].x2, sol[5].x1, sol[5].x2};

    LambdaRatios lr = lambda_ratio_predictions(sf);
    BigScalar g12 = abs(cc.lambda[1] / cc.lambda[0] - lr.from_ab) / abs(lr.from_ab);
    BigScalar g34 = abs(cc.lambda[3] / cc.lambda[2] - lr.from_ba) / abs(lr.from_ba);
    cc.lambda_ratio_gap = max(g12, g34);

    CPsiEstimate cp = estimate_cPsi(sf);
    cc.cPsi = cp.value;
    cc.flags |= cp.flags;
    return cc;
}

ConnectionConstants solve_connection(const std::array<BigPoint, 3>& pts, const SpecialFunctionSet& sf) {
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    BigScalar rmin = abs(pts[0]), rmax = abs(pts[0]);
    for (const auto& z : pts) {
        rmin = min(rmin, abs(z));
        rmax = max(rmax, abs(z));
    }
    return solve_connection(pts, sf, make_bank(rmin, rmax, ctx));
}

ConnectionConstants solve_connection(const SpecialFunctionSet& sf) {
    return solve_connection(default_sample_points(sf.ctx()), sf);
}

LambdaRatios lambda_ratio_predictions(const SpecialFunctionSet& sf) {
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    BigPoint e = polar(BigScalar(1), pi() / BigScalar(4));
    BigScalar one(1);
    PowerSeries a = make_series_for_radius(SeriesKind::A, one, ctx);
    PowerSeries b = make_series_for_radius(SeriesKind::B, one, ctx);
    BigPoint h = sf.hq_series(e), av = a(e), bv = b(e);
    return {-(h * bv / av), -(h * av / bv)};
}

}  // namespace qfreud
