#pragma once

#include "qfreud/qortho.hpp"
#include "qfreud/qseries.hpp"

#include <string>
#include <vector>

namespace qfreud {

enum class AsymRegion { Near, Far };

// Sample points are either absolute z values or, when scaled, multiples s of q^{−n/4}.
struct SampleSet {
    std::vector<BigPoint> points;
    bool scaled = false;

    BigPoint at(size_t i, int n, const BigScalar& q) const;
};

struct AsymptoticReport {
    AsymRegion region = AsymRegion::Near;
    std::string quantity;  // "P_n" or "P_{n-1}"
    std::vector<int> ns;
    std::vector<std::vector<BigScalar>> errors;  // [n index][sample]
    std::vector<BigScalar> max_error;
    double fitted_ratio = 0;  // per step of 4 in n, least squares on max_error
    BigPoint constant;  // μ2/η2 (near) or 1/(μ4ℋc_Ψ) (far, P_{n−1})
    Flags flags;
};

struct GammaRow {
    int n = 0;
    BigScalar A;  // γ_n q^{n(n−1)/2}
    BigScalar B;  // q^{(n/2)(3−n)}/γ_{n−1}
    BigScalar step;  // |A_n − A_{n−2}|, zero on the first row
};

struct GammaScaling {
    std::vector<GammaRow> rows;  // even n
    BigScalar A_est, B_est;
    BigScalar AB_gap;  // |A_est·B_est − q|
    int richardson_level = 0;
    double step_ratio = 0;  // fitted |A_n − A_{n−2}| ratio per step of 2 in n
    BigScalar alpha_gap;  // max |γ_n/γ_{n−1} − α_n|/α_n
};

struct Crossover {
    int n = 0;
    BigScalar near_inside;  // near-field error at 0.9·q^{−n/4}
    BigScalar far_outside;  // far-field error at 1.1·q^{−n/4}
    BigScalar near_outside, far_inside;
};

class AsymptoticHarness {
public:
    // Polynomials up to degree N from the c = 1 lattice; constants from the series solves.
    AsymptoticHarness(const SpecialFunctionSet& sf, int N);

    AsymptoticReport pn_near(const std::vector<int>& ns, const SampleSet& s) const;
    AsymptoticReport pn_far(const std::vector<int>& ns, const SampleSet& s) const;
    AsymptoticReport pn1_far(const std::vector<int>& ns, const SampleSet& s) const;
    Crossover crossover(int n, const BigScalar& angle) const;

    BigScalar near_error(int n, const BigPoint& z) const;
    BigScalar far_error(int n, const BigPoint& z) const;
    BigScalar far_error_odd(int n, const BigPoint& z) const;

    const MonicPolySeq& polys() const { return seq_; }
    const ConnectionConstants& connection() const { return cc_; }
    const LimitConstants& limits() const { return lc_; }

private:
    void require(int n) const;

    const SpecialFunctionSet& sf_;
    MonicPolySeq seq_;
    ConnectionConstants cc_;
    LimitConstants lc_;
    PowerSeries a_, ainf_, binf_;
};

// max over the report of max_error·q^{−n/4}: the C in an error band C·q^{n/4}
BigScalar band_constant(const AsymptoticReport& r, const BigScalar& q);

AsymptoticReport check_pn_near(int n, const SampleSet& s, const SpecialFunctionSet& sf);
AsymptoticReport check_pn_far(int n, const SampleSet& s, const SpecialFunctionSet& sf);

GammaScaling check_gamma_scaling(int N, const QContext& ctx);
GammaScaling check_gamma_scaling(const MonicPolySeq& seq, int N, const QContext& ctx);

}  // namespace qfreud
