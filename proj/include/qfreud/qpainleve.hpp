#pragma once

#include "qfreud/qortho.hpp"

#include <string>
#include <vector>

namespace qfreud {

enum class OrbitSource { Moments, ForwardIteration };

struct AlphaOrbit {
    std::string label;  // shift label, or "iterated"
    BigScalar c;  // zero for iterated orbits
    BigScalar q;
    std::vector<BigScalar> alpha;  // alpha[0] = 0
    std::vector<bool> positive;
    OrbitSource source = OrbitSource::Moments;
    int precision_bits = 0;
    int stopped_at = -1;  // first n whose α could not be formed, or −1
    Flags flags;

    int N() const { return static_cast<int>(alpha.size()) - 1; }
};

// α_n(α_{n+1} + q^{n−1}α_n + q^{−2}α_{n−1} − q^{2n−3}α_{n+1}α_nα_{n−1}) − (q^{−n} − 1)q^{1−n}
BigScalar painleve_residual(const BigScalar& a_prev, const BigScalar& a_n, const BigScalar& a_next, int n,
                            const BigScalar& q);
// the same divided by (q^{−n} − 1)q^{1−n}
BigScalar painleve_relative_residual(const BigScalar& a_prev, const BigScalar& a_n, const BigScalar& a_next, int n,
                                     const BigScalar& q);
// max relative residual over 1 ≤ n ≤ N−1, with the n where it occurs
std::pair<BigScalar, int> max_painleve_residual(const AlphaOrbit& orbit);

AlphaOrbit moment_orbit(const Shift& c, int N, const QContext& ctx);

// Solves the equation for α_{n+1}, from α₀ = 0. Stops with Blowup when the denominator
// falls below 2^{−bits/2} relative to its terms.
AlphaOrbit iterate_forward(const BigScalar& alpha1, int N, const QContext& ctx);

// first n with |α_n − β_n| > threshold·|q^{1−n} − β_n|, or −1; β is the reference orbit y
int divergence_point(const AlphaOrbit& x, const AlphaOrbit& y, const BigScalar& threshold);

struct LimitRow {
    int n = 0;
    BigScalar scaled;  // q^n α_n
    BigScalar deviation;  // |q^n α_n − q| / q^{n/2}
};

struct LimitDiagnostic {
    std::vector<LimitRow> rows;  // even n only
    // |q^nα_n − q| ≈ C·q^{κ n}, least squares over the even n in [fit_lo, fit_hi]
    double C = 0;
    double kappa = 0;
    int fit_lo = 10, fit_hi = 30;
};

LimitDiagnostic limit_diagnostic(const AlphaOrbit& orbit, int fit_lo = 10, int fit_hi = 30);

struct DiscriminationRow {
    int n = 0;
    BigScalar r;  // (α^{(c)}_n − α^{(1)}_n)/(q^{1−n} − α^{(1)}_n)
};

struct Discrimination {
    std::string label;
    BigScalar c;
    std::vector<DiscriminationRow> rows;  // even n
    BigScalar tail_min;  // min |r_n| over the last five even n
    Flags flags;
};

std::vector<Discrimination> shift_discrimination(const std::vector<Shift>& c_list, int N, const QContext& ctx);

}  // namespace qfreud
