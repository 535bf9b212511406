#pragma once

#include "qfreud/qcore.hpp"
#include "qfreud/specfun.hpp"

#include <string>
#include <vector>

namespace qfreud {

// Lattice shift c. Kept symbolic so a refined context can rebuild it at higher precision.
class Shift {
public:
    static Shift one();
    static Shift sqrt_q();
    static Shift value(const std::string& decimal);
    // accepts "1", "sqrtq" or a decimal in (q, 1]
    static Shift parse(const std::string& text);

    BigScalar eval(const QContext& ctx) const;
    const std::string& label() const { return label_; }
    bool is_one() const { return kind_ == Kind::One && qpower_ == 0; }
    // The same lattice family with c replaced by c·q.
    Shift times_q() const;

private:
    enum class Kind { One, SqrtQ, Value };
    Kind kind_ = Kind::One;
    int qpower_ = 0;
    std::string text_ = "1";
    std::string label_ = "1";
};

// Positive lattice points c·q^k, k = −K⁻..K⁺, with Jackson weights w(c q^k)·q^k.
struct LatticeTable {
    BigScalar c;
    int kneg = 0;
    int kpos = 0;
    std::vector<BigScalar> x;
    std::vector<BigScalar> weight;
};

LatticeTable make_lattice(const BigScalar& c, const QContext& ctx);

struct MomentTable {
    BigScalar c;
    std::vector<BigScalar> m;  // m[j] for j = 0..2K, odd entries exactly zero
    bool normalized = false;
    BigScalar raw_m0;
    Flags flags;

    MomentTable normalized_copy() const;
};

MomentTable compute_moments(const Shift& c, int two_k, const QContext& ctx);

struct MonicPolySeq {
    std::string shift_label;
    BigScalar c;
    int N = 0;
    std::vector<std::vector<BigScalar>> coeffs;  // coeffs[n][j]: coefficient of x^j in P_n
    std::vector<BigScalar> gamma;  // raw norms, gamma[0] = m0
    std::vector<BigScalar> alpha;  // alpha[0] = 0
    int precision_used = 0;
    int restarts = 0;
    Flags flags;

    BigScalar eval(int n, const BigScalar& x) const;
    BigPoint eval(int n, const BigPoint& z) const;
};

// Stieltjes procedure on the lattice; doubles precision and restarts if a norm loses positivity.
MonicPolySeq build_polys(const Shift& c, int N, const QContext& ctx);

struct OrthogonalityReport {
    BigScalar max_residual;  // max |<P_n,P_m>|/sqrt(γ_n γ_m), n ≠ m
    int worst_n = -1;
    int worst_m = -1;
    BigScalar max_diagonal_error;  // max |<P_n,P_n>/γ_n − 1|
};

OrthogonalityReport verify_orthogonality(const MonicPolySeq& seq, const QContext& ctx);

enum class Region { Interior, Exterior };

// ∫ P_n(x) w(x) / (z − x) d_qx over the lattice of seq; the interior branch subtracts
// P_n(z) w(z) h_q(z/c)/c, which removes the poles at the lattice points.
BigPoint second_kind(const MonicPolySeq& seq, int n, const BigPoint& z, Region region,
                     const SpecialFunctionSet& sf);

// Coefficient residual of D_{1/q}P_n − [n]_{1/q}P_{n−1} − q^{n−3}/(1/q − 1)·α_nα_{n−1}α_{n−2}·P_{n−3},
// scaled by the largest coefficient involved.
BigScalar ladder_check(const MonicPolySeq& seq, int n, const QContext& ctx);
// Same with externally supplied α values (used for sensitivity probes).
BigScalar ladder_check(const MonicPolySeq& seq, int n, const std::vector<BigScalar>& alpha, const QContext& ctx);

// P_n(z/q) − (1 − q^{n−3}z²α_n)P_n(z) − ((q^{−n}−1)z − zα_nα_{n−1}q^{n−3} + z³α_nq^{n−3})P_{n−1}(z),
// scaled by the largest term; max over samples.
BigScalar pnqdiff_check(const MonicPolySeq& seq, int n, const std::vector<BigPoint>& z_samples, const QContext& ctx);

}  // namespace qfreud
