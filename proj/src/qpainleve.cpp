#include "qfreud/qpainleve.hpp"

#include <cmath>
#include <stdexcept>

namespace qfreud {

namespace {

BigScalar rhs(int n, const BigScalar& q) {
    return (pow(q, static_cast<long>(-n)) - BigScalar(1)) * pow(q, static_cast<long>(1 - n));
}

}  // namespace

BigScalar painleve_residual(const BigScalar& a_prev, const BigScalar& a_n, const BigScalar& a_next, int n,
                            const BigScalar& q) {
    BigScalar inner = a_next + pow(q, static_cast<long>(n - 1)) * a_n + a_prev / (q * q) -
                      pow(q, static_cast<long>(2 * n - 3)) * a_next * a_n * a_prev;
    return a_n * inner - rhs(n, q);
}

BigScalar painleve_relative_residual(const BigScalar& a_prev, const BigScalar& a_n, const BigScalar& a_next, int n,
                                     const BigScalar& q) {
    return abs(painleve_residual(a_prev, a_n, a_next, n, q)) / abs(rhs(n, q));
}

std::pair<BigScalar, int> max_painleve_residual(const AlphaOrbit& orbit) {
    PrecisionScope scope(orbit.precision_bits);
    BigScalar worst(0);
    int at = -1;
    const int top = orbit.stopped_at > 0 ? orbit.stopped_at - 1 : orbit.N();
    for (int n = 1; n + 1 <= top; ++n) {
        const auto i = static_cast<size_t>(n);
        BigScalar r = painleve_relative_residual(orbit.alpha[i - 1], orbit.alpha[i], orbit.alpha[i + 1], n, orbit.q);
        if (at < 0 || r > worst) {
            worst = r;
            at = n;
        }
    }
    return {worst, at};
}

AlphaOrbit moment_orbit(const Shift& c, int N, const QContext& ctx) {
    MonicPolySeq seq = build_polys(c, N, ctx);
    AlphaOrbit o;
    o.label = seq.shift_label;
    o.c = seq.c;
    o.q = ctx.q();
    o.alpha = seq.alpha;
    o.source = OrbitSource::Moments;
    o.precision_bits = seq.precision_used;
    o.flags = seq.flags;
    o.positive.assign(o.alpha.size(), true);
    for (size_t n = 1; n < o.alpha.size(); ++n) {
        o.positive[n] = o.alpha[n].sign() > 0;
        if (!o.positive[n]) o.flags.set(Flag::LossOfPositivity);
    }
    return o;
}

AlphaOrbit iterate_forward(const BigScalar& alpha1, int N, const QContext& ctx) {
    if (N < 1) throw ConfigError("orbit length must be at least 1");
    if (!(alpha1.sign() > 0)) throw ConfigError("alpha_1 must be positive");
    auto guard = ctx.scope();
    const BigScalar& q = ctx.q();
    AlphaOrbit o;
    o.label = "iterated";
    o.c = BigScalar(0);
    o.q = q;
    o.source = OrbitSource::ForwardIteration;
    o.precision_bits = ctx.precision_bits();
    o.alpha.assign(static_cast<size_t>(N) + 1, BigScalar(0));
    o.positive.assign(static_cast<size_t>(N) + 1, true);
    o.alpha[1] = alpha1;
    const BigScalar tiny = ldexp(BigScalar(1), -(ctx.precision_bits() / 2));
    for (int n = 1; n < N; ++n) {
        const auto i = static_cast<size_t>(n);
        const BigScalar& an = o.alpha[i];
        const BigScalar& ap = o.alpha[i - 1];
        BigScalar cross = pow(q, static_cast<long>(2 * n - 3)) * an * ap;
        BigScalar den = an * (BigScalar(1) - cross);
        BigScalar den_scale = max(abs(an), abs(an * cross));
        if (abs(den) < tiny * den_scale || den.is_zero()) {
            o.flags.set(Flag::Blowup);
            o.flags.set(Flag::VanishingDenominator);
            o.stopped_at = n + 1;
            o.alpha.resize(i + 1);
            o.positive.resize(i + 1);
            return o;
        }
        BigScalar num = rhs(n, q) - pow(q, static_cast<long>(n - 1)) * an * an - an * ap / (q * q);
        o.alpha[i + 1] = num / den;
        if (!(o.alpha[i + 1].sign() > 0)) {
            o.positive[i + 1] = false;
            o.flags.set(Flag::LossOfPositivity);
        }
    }
    return o;
}

int divergence_point(const AlphaOrbit& x, const AlphaOrbit& y, const BigScalar& threshold) {
    PrecisionScope scope(std::max(x.precision_bits, y.precision_bits));
    const int top = std::min(x.N(), y.N());
    for (int n = 1; n <= top; ++n) {
        const auto i = static_cast<size_t>(n);
        BigScalar scale = abs(pow(y.q, static_cast<long>(1 - n)) - y.alpha[i]);
        if (abs(x.alpha[i] - y.alpha[i]) > threshold * scale) return n;
    }
    return -1;
}

LimitDiagnostic limit_diagnostic(const AlphaOrbit& orbit, int fit_lo, int fit_hi) {
    PrecisionScope scope(orbit.precision_bits);
    const BigScalar& q = orbit.q;
    LimitDiagnostic d;
    d.fit_lo = fit_lo;
    d.fit_hi = fit_hi;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int n = 2; n <= orbit.N(); n += 2) {
        BigScalar s = pow(q, static_cast<long>(n)) * orbit.alpha[static_cast<size_t>(n)];
        BigScalar dev = abs(s - q);
        d.rows.push_back({n, s, dev / pow(q, static_cast<long>(n / 2))});
        if (n >= fit_lo && n <= fit_hi && !dev.is_zero()) {
            double y = dev.log_abs();
            sx += n;
            sy += y;
            sxx += double(n) * n;
            sxy += n * y;
            ++m;
        }
    }
    if (m >= 2) {
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        d.kappa = slope / q.log_abs();
        d.C = std::exp((sy - slope * sx) / m);
    }
    return d;
}

std::vector<Discrimination> shift_discrimination(const std::vector<Shift>& c_list, int N, const QContext& ctx) {
    if (N < 10) throw ConfigError("discrimination needs N >= 10");
    AlphaOrbit base = moment_orbit(Shift::one(), N, ctx);
    std::vector<Discrimination> out;
    for (const Shift& c : c_list) {
        AlphaOrbit o = moment_orbit(c, N, ctx);
        PrecisionScope scope(std::max(o.precision_bits, base.precision_bits));
        const BigScalar& q = ctx.q();
        Discrimination d;
        d.label = o.label;
        d.c = o.c;
        d.flags = o.flags;
        d.flags |= base.flags;
        for (int n = 2; n <= N; n += 2) {
            const auto i = static_cast<size_t>(n);
            BigScalar r = (o.alpha[i] - base.alpha[i]) / (pow(q, static_cast<long>(1 - n)) - base.alpha[i]);
            d.rows.push_back({n, r});
        }
        const size_t k = d.rows.size();
        d.tail_min = abs(d.rows.back().r);
        for (size_t j = k >= 5 ? k - 5 : 0; j < k; ++j) d.tail_min = min(d.tail_min, abs(d.rows[j].r));
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace qfreud
