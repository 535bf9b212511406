#include "support.hpp"

#include <doctest.h>

using namespace qfreud;
using namespace qtest;

TEST_CASE("pochhammer small cases") {
    QContext ctx = desk("0.5");
    auto g = ctx.scope();
    BigScalar q = ctx.q();
    CHECK(pochhammer_inf(BigScalar(0), q, ctx) == BigScalar(1));
    CHECK(pochhammer_inf(BigScalar(1), q, ctx).is_zero());
    BigScalar ref("0.28878809508660242127889972192923078008891190484069");
    CHECK(rel(pochhammer_inf(BigScalar(0.5), q, ctx), ref) < BigScalar("1e-38"));
    CHECK_THROWS_AS(pochhammer_inf(BigScalar(0.5), BigScalar(1), ctx), NumericError);
}

TEST_CASE("pochhammer telescopes under x -> qx") {
    Sampler s(11);
    for (const char* qs : {"0.3", "0.5", "0.7"}) {
        QContext ctx = desk(qs);
        auto g = ctx.scope();
        BigScalar q = ctx.q();
        for (int i = 0; i < 10; ++i) {
            BigPoint x = s.annulus(0.1, 3.0);
            BigPoint lhs = pochhammer_inf(x * q, q, ctx) / pochhammer_inf(x, q, ctx);
            BigPoint rhs = BigPoint(BigScalar(1)) / (BigPoint(BigScalar(1)) - x);
            CHECK(rel(lhs, rhs) < BigScalar("1e-38"));
        }
    }
}

TEST_CASE("product of Pochhammer symbols composes by multiplication") {
    QContext ctx = desk("0.5");
    auto g = ctx.scope();
    BigPoint a(BigScalar(0.3), BigScalar(0.2)), b(BigScalar(-1.5), BigScalar(0.1));
    BigPoint joint = pochhammer_inf({a, b}, ctx.q(), ctx);
    CHECK(rel(joint, pochhammer_inf(a, ctx.q(), ctx) * pochhammer_inf(b, ctx.q(), ctx)) < BigScalar("1e-60"));
}

TEST_CASE("q-integers") {
    QContext ctx = desk("0.5");
    auto g = ctx.scope();
    BigScalar q = ctx.q();
    CHECK(q_integer(1, q) == BigScalar(1));
    CHECK(q_integer(2, q) == BigScalar(1.5));
    CHECK(q_integer(3, q) == BigScalar(1.75));
    CHECK(q_integer(0, q).is_zero());
    // [n]_{1/q} = q^{1-n}[n]_q
    BigScalar iq = BigScalar(1) / q;
    CHECK(rel(q_integer(5, iq), pow(q, -4L) * q_integer(5, q)) < BigScalar("1e-70"));
    CHECK(rel(q_integer(-2, q), -(pow(q, -2L) - BigScalar(1)) / (BigScalar(1) - q)) < BigScalar("1e-70"));
    CHECK_THROWS(q_integer(3, BigScalar(1)));
}

TEST_CASE("q-derivative follows the monomial law") {
    QContext ctx = desk("0.5");
    auto g = ctx.scope();
    BigScalar q = ctx.q();
    auto cst = [](const BigScalar&) { return BigScalar(7); };
    auto sq = [](const BigScalar& x) { return x * x; };
    auto cube = [](const BigScalar& x) { return x * x * x; };
    CHECK(q_derivative(cst, BigScalar(3), q).is_zero());
    CHECK(q_derivative(sq, BigScalar(1), q) == BigScalar(1.5));
    CHECK(q_derivative(cube, BigScalar(2), q) == BigScalar(7));
    BigScalar iq = BigScalar(1) / q;
    CHECK(rel(q_derivative(cube, BigScalar(2), iq), q_integer(3, iq) * BigScalar(4)) < BigScalar("1e-70"));
    CHECK_THROWS_AS(q_derivative(sq, BigScalar(0), q), NumericError);
}

namespace {
BigScalar w_real(const BigScalar& x, const QContext& ctx) {
    BigScalar x2 = x * x;
    return BigScalar(1) / pochhammer_inf(-(x2 * x2), pow(ctx.q(), 4L), ctx);
}
}  // namespace

TEST_CASE("Jackson sums") {
    QContext ctx = desk("0.5", 1024, 8);
    auto g = ctx.scope();
    auto odd = [&](const BigScalar& x) { return x * x * x * w_real(x, ctx); };
    auto r = jackson_bilateral(odd, BigScalar(1), ctx);
    CHECK(r.value.is_zero());
    CHECK(r.flags.clean());

    auto w = [&](const BigScalar& x) { return w_real(x, ctx); };
    auto m0 = jackson_bilateral(w, BigScalar(1), ctx);
    CHECK(m0.value > BigScalar(0));
    CHECK(m0.flags.clean());
    CHECK(m0.tail_estimate < ctx.trunc_tol() * m0.value);

    QContext big = ctx.refined();
    auto wb = [&](const BigScalar& x) { return w_real(x, big); };
    BigScalar m0b = jackson_bilateral(wb, BigScalar(1), big).value;
    {
        auto gb = big.scope();
        CHECK(rel(m0.value, m0b) < ctx.trunc_tol());
    }

    auto x4 = [&](const BigScalar& x) { return pow(x, 4L) * w_real(x, ctx); };
    BigScalar m4 = jackson_bilateral(x4, BigScalar(1), ctx).value;
    CHECK(rel(m4, (BigScalar(1) / ctx.q() - BigScalar(1)) * m0.value) < tol());
}

TEST_CASE("Jackson sum is linear and lattice invariant") {
    QContext ctx = desk("0.7", 1024, 6);
    auto g = ctx.scope();
    BigScalar q = ctx.q();
    auto f1 = [&](const BigScalar& x) { return x * x * w_real(x, ctx); };
    auto f2 = [&](const BigScalar& x) { return w_real(x, ctx); };
    auto both = [&](const BigScalar& x) { return f1(x) * BigScalar(3) - f2(x) * BigScalar(2); };
    BigScalar c(0.83);
    BigScalar a = jackson_bilateral(f1, c, ctx).value, b = jackson_bilateral(f2, c, ctx).value;
    CHECK(rel(jackson_bilateral(both, c, ctx).value, a * BigScalar(3) - b * BigScalar(2)) < BigScalar("1e-35"));
    // the lattice c·q·q^k is the lattice c·q^k reindexed, so the sum picks up exactly 1/q
    BigScalar shifted = jackson_bilateral(f1, c * q, ctx).value;
    CHECK(rel(shifted, a / q) < BigScalar("1e-35"));
}

TEST_CASE("context validation and refinement") {
    CHECK_THROWS_AS(QContext::make("1.2"), ConfigError);
    CHECK_THROWS_AS(QContext::make("0"), ConfigError);
    CHECK_THROWS_AS(QContext::make("abc"), ConfigError);
    CHECK_THROWS_AS(QContext::make("0.5", 0, "2"), ConfigError);
    QContext ctx = QContext::make("0.5", 0, "1e-40", 30);
    CHECK(ctx.precision_bits() == 1024);
    CHECK(QContext::default_precision_bits(0.3, 30) == 1564);
    QContext r = ctx.refined();
    CHECK(r.precision_bits() == 2048);
    CHECK(r.cutoff_pos() == 2 * ctx.cutoff_pos());
    CHECK(r.cutoff_neg() == 2 * ctx.cutoff_neg());
}
