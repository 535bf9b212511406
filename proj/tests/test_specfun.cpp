#include "support.hpp"

#include "qfreud/specfun.hpp"

#include <doctest.h>

using namespace qfreud;
using namespace qtest;

namespace {
BigPoint I() { return BigPoint(BigScalar(0), BigScalar(1)); }
BigPoint pt(double re, double im) { return BigPoint(BigScalar(re), BigScalar(im)); }
}  // namespace

TEST_CASE("h_q is q-periodic") {
    QContext ctx = desk("0.5");
    SpecialFunctionSet sf(ctx);
    auto g = ctx.scope();
    BigPoint z = pt(0.3, 0.2);
    CHECK(abs(sf.hq_series(z * ctx.q()) - sf.hq_series(z)) < tol());
    Sampler s(2024);
    BigScalar worst(0);
    for (int i = 0; i < 100; ++i) {
        BigPoint x = s.annulus(0.5, 1.0);
        if (sf.lattice_distance(x) < BigScalar(1e-3)) continue;
        worst = max(worst, abs(sf.hq_series(x * ctx.q()) - sf.hq_series(x)));
    }
    CHECK(worst < tol());
}

TEST_CASE("h_q zeros and purely imaginary circles") {
    for (const char* qs : {"0.3", "0.5", "0.7"}) {
        QContext ctx = desk(qs);
        SpecialFunctionSet sf(ctx);
        auto g = ctx.scope();
        BigScalar sq = sqrt(ctx.q());
        CHECK(abs(sf.hq_series(BigPoint(sq))) < tol());
        CHECK(abs(sf.hq_series(polar(BigScalar(1), BigScalar(0.7))).re) < tol());
        BigScalar worst(0);
        for (int j = 0; j < 64; ++j) {
            BigScalar th = pi() * BigScalar(2 * j + 1) / BigScalar(64);
            worst = max(worst, abs(sf.hq_series(polar(BigScalar(1), th)).re));
            worst = max(worst, abs(sf.hq_series(polar(sq, th)).re));
        }
        CHECK(worst < tol());
    }
}

TEST_CASE("series and product forms of h_q agree") {
    for (const char* qs : {"0.3", "0.5", "0.7"}) {
        QContext ctx = desk(qs);
        SpecialFunctionSet sf(ctx);
        auto g = ctx.scope();
        CHECK(sf.c1_spread() < tol());
        Sampler s(7);
        BigScalar worst(0);
        for (int i = 0; i < 20; ++i) {
            BigPoint z = s.annulus(0.2, 4.0);
            worst = max(worst, rel(sf.hq_product(z), sf.hq_series(z)));
        }
        CHECK(worst < tol());
        BigPoint zero = BigPoint(pow(ctx.q(), 2L) * sqrt(ctx.q()));
        CHECK(abs(sf.hq_product(zero)) < tol());
    }
}

TEST_CASE("c1 matches the residue at z = 1") {
    // closed form -2 (q²;q²)² / (q;q²)² from the residue of the series at z = 1
    const char* ref[] = {"-3.5257600316413696394430937146110865787058502549764",
                         "-5.3899149284063948757298884535301948166415703736949",
                         "-9.629478349159349666089123954406604571351793000123"};
    const char* qs[] = {"0.3", "0.5", "0.7"};
    for (int i = 0; i < 3; ++i) {
        QContext ctx = desk(qs[i]);
        SpecialFunctionSet sf(ctx);
        auto g = ctx.scope();
        CHECK(rel(sf.c1(), BigScalar(std::string(ref[i]))) < BigScalar("1e-38"));
    }
}

TEST_CASE("pole guard") {
    QContext ctx = desk("0.5");
    SpecialFunctionSet sf(ctx);
    auto g = ctx.scope();
    BigPoint near = BigPoint(ctx.q()) + pt(1e-30, 0);
    CHECK_THROWS_AS(sf.hq_series(near), NumericError);
    CHECK_THROWS_AS(sf.hq_product(BigPoint(BigScalar(-2))), NumericError);
    CHECK_THROWS_AS(sf.hq_series(BigPoint()), NumericError);
    CHECK_NOTHROW(sf.hq_series(near, Guard::Off));
    BigPoint wpole = polar(BigScalar(2), pi() / BigScalar(4));
    CHECK_THROWS_AS(sf.weight_w(wpole), NumericError);
    CHECK_THROWS_AS(sf.omegafun(polar(ctx.q(), pi() * BigScalar(0.75))), NumericError);
}

TEST_CASE("weight, g and omega difference identities") {
    QContext ctx = desk("0.5");
    SpecialFunctionSet sf(ctx);
    auto g = ctx.scope();
    const BigScalar& q = ctx.q();
    CHECK(sf.weight_w(BigScalar(0)) == BigScalar(1));
    CHECK(sf.gfun(BigPoint(BigScalar(1))).is_zero());
    BigScalar z(1.3);
    CHECK(rel(sf.weight_w(q * z) / sf.weight_w(z), BigScalar(1) + pow(z, 4L)) < tol());
    Sampler s(99);
    for (int i = 0; i < 10; ++i) {
        BigPoint x = s.annulus(0.3, 2.5);
        BigPoint one(BigScalar(1));
        CHECK(rel(sf.weight_w(x * q), (one + pow(x, 4)) * sf.weight_w(x)) < tol());
        CHECK(rel(sf.gfun(x * q), -(sf.gfun(x) / (x * x))) < tol());
        CHECK(rel(sf.omegafun(x * q), pow(x, 4) * sf.omegafun(x)) < tol());
        CHECK(rel(sf.hq_series(x) * sf.gfun(x), sf.gh(x)) < tol());
    }
}

TEST_CASE("g shifted by half-integer powers of q") {
    QContext ctx = desk("0.5");
    SpecialFunctionSet sf(ctx);
    auto g = ctx.scope();
    const BigScalar& q = ctx.q();
    Sampler s(5);
    for (int n = 2; n <= 12; n += 2) {
        BigPoint z = s.annulus(0.4, 2.0);
        BigScalar sign((n / 2) % 2 == 0 ? 1 : -1);
        BigScalar e = pow(q, BigScalar(n * n) / BigScalar(4) + BigScalar(n) / BigScalar(2));
        BigPoint lhs = sf.gfun(z * pow(q, static_cast<long>(-n / 2))) * (sign * e) / pow(z, n);
        CHECK(rel(lhs, sf.gfun(z)) < tol());
    }
}

TEST_CASE("w and omega are related by a shift of q^{n/2}") {
    QContext ctx = desk("0.5");
    SpecialFunctionSet sf(ctx);
    auto g = ctx.scope();
    const BigScalar& q = ctx.q();
    Sampler s(6);
    BigScalar q4 = pow(q, 4L);
    for (int n = 2; n <= 12; n += 2) {
        BigPoint z = s.annulus(0.5, 2.0);
        BigPoint lhs = sf.weight_w(z) * pow(z, 2 * n) * pow(q, static_cast<long>(n * (n / 2 - 1)));
        BigPoint rhs = pochhammer_inf(-(BigPoint(q4) / pow(z, 4)), q4, ctx) *
                       sf.omegafun(z * pow(q, static_cast<long>(n / 2)));
        CHECK(rel(lhs, rhs) < tol());
    }
}

TEST_CASE("c0 and the constant H") {
    const char* refH[] = {"1.30199803251306591859634548595318785364964086081162879851735",
                          "0.394884529963314465535506912095408031648670140007981490545768",
                          "0.00966675363497523772301621563871194277509485845989029919087197"};
    const char* qs[] = {"0.3", "0.5", "0.7"};
    for (int i = 0; i < 3; ++i) {
        QContext ctx = desk(qs[i]);
        SpecialFunctionSet sf(ctx);
        LimitConstants lc = limit_c0_calH(sf);
        auto g = ctx.scope();
        CHECK(lc.flags.clean());
        CHECK(abs(lc.product - BigScalar(1)) < tol());
        // H through the entire product form of g·h_q, no lattice offsets involved
        CHECK(rel(lc.calH, BigScalar(std::string(refH[i]))) < tol());
        BigScalar gh = sf.gh(BigPoint(ctx.q())).re;
        CHECK(rel(lc.calH, sf.omegafun(BigPoint(ctx.q())).re * gh * gh) < tol());
        CHECK(lc.calH_offset_gap < tol());
    }
}

TEST_CASE("c0 converges geometrically in k") {
    QContext ctx = desk("0.5");
    LimitConstants lc = limit_c0_calH(ctx);
    auto g = ctx.scope();
    REQUIRE(lc.c0_steps.size() >= 8);
    // k = 6..12: each step shrinks by about q^4
    for (int k = 6; k < 12; ++k) {
        double ratio = (lc.c0_steps[k - 1] / lc.c0_steps[k - 2]).to_double();
        CHECK(ratio == doctest::Approx(0.0625).epsilon(0.2));
    }
}

TEST_CASE("h_q along the diagonal rays") {
    QContext ctx = desk("0.5");
    SpecialFunctionSet sf(ctx);
    auto g = ctx.scope();
    const BigScalar& q = ctx.q();
    BigScalar quarter = pi() / BigScalar(4);
    std::vector<BigScalar> grid;
    for (int k = -2; k <= 3; ++k) grid.push_back(pow(q, BigScalar(k) / BigScalar(2)));
    auto on = hq_ray_scan(grid, quarter, sf);
    for (const auto& row : on) CHECK(abs(row.re) < tol());
    std::vector<BigScalar> mid;
    for (int k = -2; k <= 3; ++k) mid.push_back(pow(q, (BigScalar(k) + BigScalar(0.5)) / BigScalar(2)));
    auto a = hq_ray_scan(mid, quarter, sf);
    auto b = hq_ray_scan(mid, quarter * BigScalar(3), sf);
    for (size_t i = 0; i < mid.size(); ++i) {
        CHECK(abs(a[i].re) > BigScalar(1e-3));
        CHECK(abs(a[i].re + b[i].re) < tol());
        CHECK(abs(a[i].im - b[i].im) < tol());
    }
}
