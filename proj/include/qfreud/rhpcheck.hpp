#pragma once

#include "qfreud/qortho.hpp"
#include "qfreud/qseries.hpp"

#include <array>
#include <vector>

namespace qfreud {

// Closed star-shaped curve around 0, sampled at θ_j = 2π(j + 1/2)/S.
// Flower: r(θ) = q^{−cos(4θ)/4}, which passes outside ±1 and inside e^{iπ/4}.
// Circle: r = q^{−1/4}; convenient, but it also encloses the diagonal point e^{iπ/4}.
struct ContourSpec {
    enum class Shape { Flower, Circle };
    Shape shape = Shape::Flower;
    int samples = 32;

    static ContourSpec flower(int samples = 32);
    static ContourSpec circle(int samples = 32);

    BigScalar radius(const BigScalar& theta, const BigScalar& q) const;
    std::vector<BigPoint> points(const QContext& ctx) const;
    // ±q^k (k ≥ 0) inside; ±q^{−k} (k ≥ 1) and e^{iπ(2m+1)/4}q^{−k} (k ≥ 0) outside.
    bool appropriate(const QContext& ctx) const;
};

struct ParametrixMatrix {
    std::array<BigPoint, 4> m;  // row-major
    Region region = Region::Interior;
    Flags flags;

    const BigPoint& at(int i, int j) const { return m[static_cast<size_t>(2 * i + j)]; }
    BigPoint& at(int i, int j) { return m[static_cast<size_t>(2 * i + j)]; }
};

ParametrixMatrix operator*(const ParametrixMatrix& x, const ParametrixMatrix& y);
ParametrixMatrix inverse(const ParametrixMatrix& x);
BigPoint det(const ParametrixMatrix& x);
// max |x_ij − δ_ij|
BigScalar deviation_from_identity(const ParametrixMatrix& x);

struct RhpConstants {
    BigPoint eta2;
    std::array<BigPoint, 4> lambda;
    BigPoint mu2, mu4;
    BigScalar cPsi, calH, c0;
    Flags flags;

    // c0 scaled by factor and ℋ = 1/c0 kept in step; used to probe the glue metric
    RhpConstants with_c0_scaled(double factor) const;
};

RhpConstants rhp_constants(const SpecialFunctionSet& sf);

// [[1/g, w g h_q], [0, g]] at z
ParametrixMatrix nearfield_jump(const BigPoint& z, const SpecialFunctionSet& sf);

// Holds the series needed for both parametrices on rmin ≤ |z| ≤ rmax.
class Parametrix {
public:
    Parametrix(const SpecialFunctionSet& sf, RhpConstants k, const BigScalar& rmin, const BigScalar& rmax);

    ParametrixMatrix near(const BigPoint& z, Region region) const;
    ParametrixMatrix far(const BigPoint& t, Region region) const;
    const RhpConstants& constants() const { return k_; }
    const SpecialFunctionSet& functions() const { return sf_; }

private:
    const SpecialFunctionSet& sf_;
    RhpConstants k_;
    PowerSeries a_, b_, ainf_, binf_, psi_odd_, varpsi_even_;
};

ParametrixMatrix nearfield_eval(const BigPoint& z, Region region, const RhpConstants& k, const SpecialFunctionSet& sf);
ParametrixMatrix farfield_eval(const BigPoint& t, Region region, const RhpConstants& k, const SpecialFunctionSet& sf);

struct GlueResult {
    int n = 0;
    BigScalar residual;
    BigPoint worst_sample;
    Flags flags;
};

// max over s on the contour of |diag(μ2, 1/c_Ψ)·𝔚_ext(s q^{−n/4})|^{-1} 𝒲~_int(s q^{n/4}) − I|,
// with 𝒲~ the second column of 𝒲 scaled by (−q⁴z⁻⁴;q⁴)∞.
GlueResult glue_residual(int n, const ContourSpec& contour, const RhpConstants& k, const SpecialFunctionSet& sf);

struct GlueRow {
    int n = 0;
    BigScalar residual;
    double ratio = 0;  // residual(n)/residual(previous n); 0 on the first row
};

struct GlueTable {
    std::vector<GlueRow> rows;
    double fitted_ratio = 0;  // least-squares ratio per step of 4 in n
    Flags flags;
};

GlueTable glue_table(const std::vector<int>& ns, const ContourSpec& contour, const RhpConstants& k,
                     const SpecialFunctionSet& sf);

}  // namespace qfreud
