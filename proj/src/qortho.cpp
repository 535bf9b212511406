#include "qfreud/qortho.hpp"

#include <algorithm>

namespace qfreud {

Shift Shift::one() { return Shift(); }

Shift Shift::sqrt_q() {
    Shift s;
    s.kind_ = Kind::SqrtQ;
    s.label_ = "sqrtq";
    return s;
}

Shift Shift::value(const std::string& decimal) {
    Shift s;
    s.kind_ = Kind::Value;
    s.text_ = decimal;
    s.label_ = decimal;
    return s;
}

Shift Shift::parse(const std::string& text) {
    if (text == "1") return one();
    if (text == "sqrtq" || text == "q^1/2") return sqrt_q();
    try {
        PrecisionScope guard(64);
        BigScalar probe(text);
        (void)probe;
    } catch (const std::invalid_argument&) {
        throw ConfigError("shift is not a number: " + text);
    }
    return value(text);
}

Shift Shift::times_q() const {
    Shift s = *this;
    s.qpower_ += 1;
    s.label_ += "*q";
    return s;
}

BigScalar Shift::eval(const QContext& ctx) const {
    auto guard = ctx.scope();
    BigScalar c;
    switch (kind_) {
        case Kind::One: c = BigScalar(1); break;
        case Kind::SqrtQ: c = sqrt(ctx.q()); break;
        case Kind::Value: c = BigScalar(text_); break;
    }
    if (!(c > ctx.q() && c <= BigScalar(1))) throw ConfigError("shift c must lie in (q, 1]: " + text_);
    return c * pow(ctx.q(), static_cast<long>(qpower_));
}

LatticeTable make_lattice(const BigScalar& c, const QContext& ctx) {
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    BigScalar q4 = pow(q, 4L);
    LatticeTable t;
    t.c = c;
    t.kneg = ctx.cutoff_neg();
    t.kpos = ctx.cutoff_pos();
    size_t count = static_cast<size_t>(t.kneg + t.kpos + 1);
    t.x.reserve(count);
    t.weight.reserve(count);
    BigScalar qk = pow(q, static_cast<long>(-t.kneg));
    for (int k = -t.kneg; k <= t.kpos; ++k) {
        BigScalar x = c * qk;
        BigScalar x2 = x * x;
        t.weight.push_back(qk / pochhammer_inf(-(x2 * x2), q4, ctx));
        t.x.push_back(std::move(x));
        qk *= q;
    }
    return t;
}

MomentTable MomentTable::normalized_copy() const {
    MomentTable out = *this;
    out.normalized = true;
    for (auto& v : out.m) v = v / m[0];
    return out;
}

MomentTable compute_moments(const Shift& shift, int two_k, const QContext& ctx) {
    if (two_k < 0) throw std::invalid_argument("moment degree must be non-negative");
    auto guard = ctx.scope();
    BigScalar c = shift.eval(ctx);
    BigScalar q4 = pow(ctx.q(), 4L);
    MomentTable t;
    t.c = c;
    t.m.assign(static_cast<size_t>(two_k) + 1, BigScalar(0));
    for (int j = 0; j <= two_k; j += 2) {
        auto f = [&](const BigScalar& x) {
            BigScalar x2 = x * x;
            return pow(x, static_cast<long>(j)) / pochhammer_inf(-(x2 * x2), q4, ctx);
        };
        auto s = jackson_bilateral(f, c, ctx);
        t.m[static_cast<size_t>(j)] = s.value;
        t.flags |= s.flags;
    }
    t.raw_m0 = t.m[0];
    return t;
}

namespace {

bool try_build(const BigScalar& c, int N, const QContext& ctx, MonicPolySeq& out) {
    auto guard = ctx.scope();
    LatticeTable lat = make_lattice(c, ctx);
    const size_t L = lat.x.size();
    out.c = c;
    out.N = N;
    out.coeffs.assign(static_cast<size_t>(N) + 1, {});
    out.gamma.assign(static_cast<size_t>(N) + 1, BigScalar(0));
    out.alpha.assign(static_cast<size_t>(N) + 1, BigScalar(0));
    out.precision_used = ctx.precision_bits();

    std::vector<BigScalar> prev(L, BigScalar(0)), cur(L, BigScalar(1));
    out.coeffs[0] = {BigScalar(1)};
    for (int n = 0; n <= N; ++n) {
        BigScalar g(0);
        for (size_t k = 0; k < L; ++k) g += cur[k] * cur[k] * lat.weight[k];
        g *= BigScalar(2);
        if (g.sign() <= 0) return false;
        out.gamma[static_cast<size_t>(n)] = g;
        if (n > 0) out.alpha[static_cast<size_t>(n)] = g / out.gamma[static_cast<size_t>(n) - 1];
        if (n == N) break;
        const BigScalar& a = out.alpha[static_cast<size_t>(n)];
        std::vector<BigScalar> next(L);
        for (size_t k = 0; k < L; ++k) next[k] = lat.x[k] * cur[k] - a * prev[k];
        prev.swap(cur);
        cur.swap(next);
        // coefficients: P_{n+1} = x P_n − α_n P_{n−1}
        std::vector<BigScalar> pc(static_cast<size_t>(n) + 2, BigScalar(0));
        const auto& pn = out.coeffs[static_cast<size_t>(n)];
        for (int j = 0; j <= n; ++j) pc[static_cast<size_t>(j) + 1] = pn[static_cast<size_t>(j)];
        if (n > 0) {
            const auto& pm = out.coeffs[static_cast<size_t>(n) - 1];
            for (int j = n - 1; j >= 0; j -= 2) pc[static_cast<size_t>(j)] -= a * pm[static_cast<size_t>(j)];
        }
        out.coeffs[static_cast<size_t>(n) + 1] = std::move(pc);
    }
    return true;
}

}  // namespace

MonicPolySeq build_polys(const Shift& shift, int N, const QContext& ctx) {
    if (N < 0) throw std::invalid_argument("degree must be non-negative");
    MonicPolySeq out;
    out.shift_label = shift.label();
    QContext run = ctx;
    for (int attempt = 0; attempt < 4; ++attempt) {
        if (try_build(shift.eval(run), N, run, out)) {
            out.restarts = attempt;
            return out;
        }
        run = run.with_precision(run.precision_bits() * 2);
    }
    out.restarts = 4;
    out.flags.set(Flag::LossOfPositivity);
    return out;
}

BigScalar MonicPolySeq::eval(int n, const BigScalar& x) const {
    const auto& cf = coeffs.at(static_cast<size_t>(n));
    BigScalar acc(0);
    for (size_t j = cf.size(); j-- > 0;) acc = acc * x + cf[j];
    return acc;
}

BigPoint MonicPolySeq::eval(int n, const BigPoint& z) const {
    const auto& cf = coeffs.at(static_cast<size_t>(n));
    BigPoint acc;
    for (size_t j = cf.size(); j-- > 0;) acc = acc * z + BigPoint(cf[j]);
    return acc;
}

OrthogonalityReport verify_orthogonality(const MonicPolySeq& seq, const QContext& ctx) {
    auto guard = ctx.scope();
    LatticeTable lat = make_lattice(seq.c, ctx);
    const size_t L = lat.x.size();
    const int N = seq.N;
    // values from the coefficient arrays, independent of the recurrence that produced them
    std::vector<std::vector<BigScalar>> v(static_cast<size_t>(N) + 1, std::vector<BigScalar>(L));
    for (int n = 0; n <= N; ++n)
        for (size_t k = 0; k < L; ++k) v[static_cast<size_t>(n)][k] = seq.eval(n, lat.x[k]);
    OrthogonalityReport rep;
    rep.max_residual = BigScalar(0);
    rep.max_diagonal_error = BigScalar(0);
    for (int n = 0; n <= N; ++n) {
        for (int m = n; m <= N; m += 2) {  // opposite parities cancel pointwise between ±x
            BigScalar s(0);
            for (size_t k = 0; k < L; ++k) s += v[static_cast<size_t>(n)][k] * v[static_cast<size_t>(m)][k] * lat.weight[k];
            s *= BigScalar(2);
            const BigScalar& gn = seq.gamma[static_cast<size_t>(n)];
            const BigScalar& gm = seq.gamma[static_cast<size_t>(m)];
            if (m == n) {
                rep.max_diagonal_error = max(rep.max_diagonal_error, abs(s / gn - BigScalar(1)));
                continue;
            }
            BigScalar r = abs(s) / sqrt(gn * gm);
            if (r > rep.max_residual) {
                rep.max_residual = r;
                rep.worst_n = n;
                rep.worst_m = m;
            }
        }
    }
    return rep;
}

BigPoint second_kind(const MonicPolySeq& seq, int n, const BigPoint& z, Region region, const SpecialFunctionSet& sf) {
    const QContext& ctx = sf.ctx();
    auto guard = ctx.scope();
    if (n < 0 || n > seq.N) throw std::out_of_range("degree outside sequence");
    LatticeTable lat = make_lattice(seq.c, ctx);
    BigPoint sum;
    for (size_t k = 0; k < lat.x.size(); ++k) {
        BigScalar p = seq.eval(n, lat.x[k]);
        BigScalar pm = (n % 2 == 0) ? p : -p;
        BigPoint x(lat.x[k]);
        sum += (BigPoint(p) / (z - x) + BigPoint(pm) / (z + x)) * lat.weight[k];
    }
    if (region == Region::Interior) {
        BigPoint zc = z / seq.c;
        sum -= seq.eval(n, z) * sf.weight_w(z, Guard::Off) * sf.hq_series(zc, Guard::Off) / seq.c;
    }
    return sum;
}

BigScalar ladder_check(const MonicPolySeq& seq, int n, const std::vector<BigScalar>& alpha, const QContext& ctx) {
    if (n < 3 || n > seq.N) throw std::out_of_range("ladder check needs 3 <= n <= N");
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    BigScalar iq = BigScalar(1) / q;
    const auto& pn = seq.coeffs[static_cast<size_t>(n)];
    const auto& p1 = seq.coeffs[static_cast<size_t>(n) - 1];
    const auto& p3 = seq.coeffs[static_cast<size_t>(n) - 3];
    BigScalar k = pow(q, static_cast<long>(n - 3)) / (iq - BigScalar(1)) * alpha[static_cast<size_t>(n)] *
                  alpha[static_cast<size_t>(n) - 1] * alpha[static_cast<size_t>(n) - 2];
    BigScalar nq = q_integer(n, iq);
    BigScalar worst(0), scale(0);
    for (int j = 0; j < n; ++j) {
        // D_{1/q} x^{j+1} = [j+1]_{1/q} x^j
        BigScalar d = q_integer(j + 1, iq) * pn[static_cast<size_t>(j) + 1];
        BigScalar b = nq * p1[static_cast<size_t>(j)];
        BigScalar c = j <= n - 3 ? k * p3[static_cast<size_t>(j)] : BigScalar(0);
        worst = max(worst, abs(d - b - c));
        scale = max(scale, max(abs(d), max(abs(b), abs(c))));
    }
    return worst / scale;
}

BigScalar ladder_check(const MonicPolySeq& seq, int n, const QContext& ctx) {
    return ladder_check(seq, n, seq.alpha, ctx);
}

BigScalar pnqdiff_check(const MonicPolySeq& seq, int n, const std::vector<BigPoint>& z_samples, const QContext& ctx) {
    if (n < 1 || n > seq.N) throw std::out_of_range("q-difference check needs 1 <= n <= N");
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    const BigScalar& an = seq.alpha[static_cast<size_t>(n)];
    const BigScalar& am = seq.alpha[static_cast<size_t>(n) - 1];
    BigScalar qn3 = pow(q, static_cast<long>(n - 3));
    BigScalar worst(0);
    for (const auto& z : z_samples) {
        if (z.is_zero()) continue;  // every term vanishes or cancels by parity
        BigPoint z2 = z * z;
        BigPoint t1 = seq.eval(n, z / q);
        BigPoint t2 = (BigPoint(BigScalar(1)) - z2 * (qn3 * an)) * seq.eval(n, z);
        BigPoint t3 = (z * (pow(q, static_cast<long>(-n)) - BigScalar(1)) - z * (an * am * qn3) + z2 * z * (an * qn3)) *
                      seq.eval(n - 1, z);
        BigScalar scale = max(abs(t1), max(abs(t2), abs(t3)));
        worst = max(worst, abs(t1 - t2 - t3) / scale);
    }
    return worst;
}

}  // namespace qfreud
