#pragma once

#include "qfreud/qcore.hpp"
#include "qfreud/specfun.hpp"

#include <array>
#include <string>
#include <vector>

namespace qfreud {

enum class SeriesKind {
    A,  // near 0, even, seed a0 = 1
    B,  // near 0, odd, seed b1 = 1
    PhiEven,
    PhiOdd,
    VarphiEven,
    VarphiOdd,
    AInf,
    BInf,
    PsiEven,
    PsiOdd,
    VarPsiEven,
    VarPsiOdd,
};

enum class Expansion { AscendingAtZero, DescendingAtInfinity };
enum class Parity { Even, Odd };
enum class Validity { Entire, OutsideDiskQ, Punctured };

// The q-difference equations solved by the series, by name of the unknown's variable.
enum class Equation {
    NearZero,  // a, b
    VDiff,  // φ
    UDiff,  // ϕ
    NearInf,  // a_∞
    NearInf2,  // b_∞
    VInf,  // Ψ
    VInf2,  // ϝΨ
};

const char* series_name(SeriesKind k);
Expansion expansion_of(SeriesKind k);
Parity parity_of(SeriesKind k);
Validity validity_of(SeriesKind k);
Equation equation_of(SeriesKind k);

struct SeriesValue {
    BigPoint value;
    BigScalar last_term;  // largest of the final retained terms, relative to the largest term
    Flags flags;
};

class PowerSeries {
public:
    PowerSeries() = default;
    PowerSeries(SeriesKind kind, std::vector<BigScalar> coeffs, BigScalar q, BigScalar tail_tol);

    SeriesKind kind() const { return kind_; }
    Expansion expansion() const { return expansion_of(kind_); }
    Parity parity() const { return parity_of(kind_); }
    Validity validity() const { return validity_of(kind_); }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<BigScalar>& coeffs() const { return coeffs_; }
    const BigScalar& coeff(int i) const { return coeffs_.at(static_cast<size_t>(i)); }

    bool in_domain(const BigPoint& z) const;
    // Sums the series with a tail check; never throws.
    SeriesValue eval_checked(const BigPoint& z, const BigScalar& tol) const;
    // Throws NumericError when z is outside the validity domain or the tail check fails.
    BigPoint operator()(const BigPoint& z) const;

private:
    SeriesKind kind_ = SeriesKind::A;
    std::vector<BigScalar> coeffs_;
    BigScalar q_;
    BigScalar tol_;
};

// Coefficients 0..M of the given series from its recurrence.
PowerSeries make_series(SeriesKind kind, int M, const QContext& ctx);
// Order large enough that the tail at |z| = radius (or |1/z| = 1/radius at ∞) is below trunc_tol.
PowerSeries make_series_for_radius(SeriesKind kind, const BigScalar& radius, const QContext& ctx);
int default_order(const QContext& ctx);

// All twelve series, with orders chosen for evaluation on rmin ≤ |z| ≤ rmax.
struct SeriesBank {
    BigScalar rmin, rmax;
    PowerSeries a, b;
    PowerSeries phi_even, phi_odd;
    PowerSeries varphi_even, varphi_odd;
    PowerSeries a_inf, b_inf;
    PowerSeries psi_even, psi_odd, varpsi_even, varpsi_odd;
};

SeriesBank make_bank(const BigScalar& rmin, const BigScalar& rmax, const QContext& ctx);

struct SeriesPair {
    PowerSeries first;
    PowerSeries second;
};

SeriesPair series_ab(int M, const QContext& ctx);
SeriesPair series_phi(int M, const QContext& ctx);
SeriesPair series_varphi(int M, const QContext& ctx);
SeriesPair series_farfield(int M, const QContext& ctx);
std::array<PowerSeries, 4> series_Psi(int M, const QContext& ctx);  // Ψ_even, Ψ_odd, ϝΨ_even, ϝΨ_odd

// Residual of the equation at z, relative to the largest of its three terms.
template <class F>
BigScalar equation_residual(Equation eq, F&& f, const BigPoint& z, const BigScalar& q);

struct CPsiEstimate {
    BigScalar value;
    BigScalar error_estimate;
    std::vector<BigScalar> raw;  // ϝΨ_even/g at |t| = q^{-j-1/2}e^{iπ/8}
    std::vector<BigScalar> imag_parts;
    BigScalar min_lattice_distance;
    double decay_ratio = 0;  // fitted ratio of successive raw differences
    Flags flags;
};

CPsiEstimate estimate_cPsi(const SpecialFunctionSet& sf);
CPsiEstimate estimate_cPsi(const QContext& ctx);

struct ConnectionConstants {
    std::array<BigPoint, 4> eta;
    std::array<BigPoint, 4> lambda;
    std::array<BigPoint, 4> mu;
    BigScalar cPsi;
    std::array<BigPoint, 2> sample_points;
    BigPoint held_out;
    // held-out residuals of the six decompositions, in the order η12, η34, λ34, λ12, μ12, μ34
    std::array<BigScalar, 6> residuals;
    std::array<BigScalar, 6> condition;
    BigScalar lambda_ratio_gap;  // max of |λ2/λ1 − ρ12|, |λ4/λ3 − ρ34| relative
    Flags flags;
};

std::array<BigPoint, 3> default_sample_points(const QContext& ctx);

ConnectionConstants solve_connection(const std::array<BigPoint, 3>& points, const SpecialFunctionSet& sf);
ConnectionConstants solve_connection(const std::array<BigPoint, 3>& points, const SpecialFunctionSet& sf,
                                     const SeriesBank& bank);
ConnectionConstants solve_connection(const SpecialFunctionSet& sf);

// −h_q(e^{iπ/4}) b(e^{iπ/4}) / a(e^{iπ/4}) and −h_q a / b at the same point.
struct LambdaRatios {
    BigPoint from_ba;
    BigPoint from_ab;
};
LambdaRatios lambda_ratio_predictions(const SpecialFunctionSet& sf);

// ---- template definitions ----

template <class F>
BigScalar equation_residual(Equation eq, F&& f, const BigPoint& z, const BigScalar& q) {
    BigScalar one(1);
    BigScalar iq = one / q;
    BigScalar q2 = q * q;
    BigPoint f0 = f(z), f1 = f(z / q), f2 = f(z / q2);
    BigPoint z2 = z * z;
    BigPoint z4 = z2 * z2;
    BigPoint uno(one);
    BigPoint c2, c1, c0;
    switch (eq) {
        case Equation::NearZero:
            c2 = uno;
            c1 = z2 * (pow(q, -3L) * (one + iq)) - BigPoint(one + iq);
            c0 = (uno + z4 * pow(q, -4L)) * iq;
            break;
        case Equation::VDiff:
            c2 = BigPoint(pow(q, 6L)) / z4 + BigPoint(pow(q, -2L));
            c1 = BigPoint(q * (one + q)) / z2 - BigPoint((one + iq) * iq);
            c0 = BigPoint(iq);
            break;
        case Equation::UDiff:
            c2 = BigPoint(pow(q, -5L));
            c1 = ((one + iq) / z2 - BigPoint(pow(q, -3L) * (one + iq))) * iq;
            c0 = uno / z4 + BigPoint(pow(q, -4L));
            break;
        case Equation::NearInf:
        case Equation::NearInf2:
            c2 = BigPoint(pow(q, 7L)) / z4;
            c1 = BigPoint(q2 * (q + one)) / z2 - BigPoint(eq == Equation::NearInf ? one : iq);
            c0 = uno;
            break;
        case Equation::VInf:
        case Equation::VInf2:
            c2 = BigPoint(q);
            c1 = z2 * (eq == Equation::VInf ? one / q2 : pow(q, -3L)) - BigPoint(one + q);
            c0 = uno;
            break;
    }
    BigPoint t2 = c2 * f2, t1 = c1 * f1, t0 = c0 * f0;
    BigScalar scale = max(abs(t2), max(abs(t1), abs(t0)));
    return abs(t2 + t1 + t0) / scale;
}

}  // namespace qfreud
