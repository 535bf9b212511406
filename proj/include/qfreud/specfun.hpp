#pragma once

#include "qfreud/qcore.hpp"

#include <vector>

namespace qfreud {

enum class Guard { On, Off };

class SpecialFunctionSet {
public:
    // Calibrates c1 at z* = 0.4·e^{iπ/8} and checks it at ten further points.
    explicit SpecialFunctionSet(const QContext& ctx);

    const QContext& ctx() const { return ctx_; }
    const BigScalar& c1() const { return c1_; }
    // max relative deviation of the c1 ratio over the check points
    const BigScalar& c1_spread() const { return c1_spread_; }
    const BigScalar& guard_radius() const { return guard_; }

    BigPoint hq_series(const BigPoint& z, Guard guard = Guard::On) const;
    BigPoint hq_product(const BigPoint& z, Guard guard = Guard::On) const;
    // g(z)·h_q(z) with the lattice zeros and poles cancelled: c1·z·(qz², qz^{-2}; q²)∞
    BigPoint gh(const BigPoint& z) const;

    BigScalar weight_w(const BigScalar& x) const;
    BigPoint weight_w(const BigPoint& x, Guard guard = Guard::On) const;
    BigPoint gfun(const BigPoint& z) const;
    BigPoint omegafun(const BigPoint& t, Guard guard = Guard::On) const;

    BigScalar lattice_distance(const BigPoint& z) const;  // min_k |z ∓ q^k|

private:
    BigPoint hq_product_raw(const BigPoint& z) const;

    QContext ctx_;
    BigScalar q2_, q4_;
    BigScalar c1_, c1_spread_, guard_;
};

BigPoint hq_series(const BigPoint& z, const QContext& ctx);
BigPoint hq_product(const BigPoint& z, const QContext& ctx);
BigPoint weight_w(const BigPoint& x, const QContext& ctx);
BigPoint gfun(const BigPoint& z, const QContext& ctx);
BigPoint omegafun(const BigPoint& t, const QContext& ctx);

struct LatticeLimit {
    BigPoint value;  // Richardson-extrapolated
    BigPoint coarse;  // offset ε
    BigPoint fine;  // offset ε/2
};

// Limit of f at a point where f's factors are singular but f is not:
// symmetric offsets z(1±ε), ε = 2^{-bits/4}, then one Richardson step.
template <class F>
LatticeLimit lattice_limit(F&& f, const BigPoint& z, const QContext& ctx) {
    auto guard = ctx.scope();
    BigScalar eps = ldexp(BigScalar(1), -(ctx.precision_bits() / 4));
    auto sym = [&](const BigScalar& e) {
        BigPoint up = f(z * (BigScalar(1) + e));
        BigPoint dn = f(z * (BigScalar(1) - e));
        return (up + dn) / BigScalar(2);
    };
    BigPoint coarse = sym(eps);
    BigPoint fine = sym(eps / BigScalar(2));
    return {(fine * BigScalar(4) - coarse) / BigScalar(3), coarse, fine};
}

struct LimitConstants {
    BigScalar c0;
    BigScalar calH;
    BigScalar product;  // c0·ℋ
    int k_used = 0;
    std::vector<BigScalar> c0_steps;  // |c0(k) − c0(k−1)|
    BigScalar calH_offset_gap;  // |ℋ(ε) − ℋ(ε/2)| before extrapolation
    Flags flags;
};

LimitConstants limit_c0_calH(const SpecialFunctionSet& sf);
LimitConstants limit_c0_calH(const QContext& ctx);

struct RayPoint {
    BigScalar r;
    BigScalar re;
    BigScalar im;
};

std::vector<RayPoint> hq_ray_scan(const std::vector<BigScalar>& r_grid, const BigScalar& angle,
                                  const SpecialFunctionSet& sf);

}  // namespace qfreud
