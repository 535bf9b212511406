#include "support.hpp"
#include "oracles.hpp"

#include "qfreud/qortho.hpp"

#include <doctest.h>

using namespace qfreud;
using namespace qtest;

TEST_CASE("moment identities") {
    for (const char* qs : {"0.3", "0.5", "0.7"}) {
        QContext ctx = desk(qs, 1024, 8);
        for (const Shift& c : {Shift::one(), Shift::sqrt_q(), Shift::value("0.8"), Shift::value("0.95")}) {
            MomentTable t = compute_moments(c, 6, ctx);
            auto g = ctx.scope();
            const BigScalar& q = ctx.q();
            CHECK(t.flags.clean());
            CHECK(rel(t.m[4] / t.m[0], BigScalar(1) / q - BigScalar(1)) < tol());
            CHECK(rel(t.m[6] / t.m[2], pow(q, -3L) - BigScalar(1)) < tol());
            CHECK(t.m[1].is_zero());
            CHECK(t.m[3].is_zero());
            CHECK(t.m[5].is_zero());
            MomentTable nt = t.normalized_copy();
            CHECK(nt.m[0] == BigScalar(1));
            CHECK(nt.raw_m0 == t.m[0]);
        }
    }
}

TEST_CASE("first polynomials") {
    QContext ctx = desk("0.5", 1024, 8);
    MonicPolySeq s = build_polys(Shift::one(), 8, ctx);
    MomentTable m = compute_moments(Shift::one(), 4, ctx);
    auto g = ctx.scope();
    REQUIRE(s.flags.clean());
    CHECK(s.coeffs[1][0].is_zero());
    CHECK(s.coeffs[1][1] == BigScalar(1));
    CHECK(rel(s.alpha[1], m.m[2] / m.m[0]) < tol());
    CHECK(rel(s.gamma[0], m.m[0]) < tol());
    // frozen from an independent mpmath summation
    CHECK(rel(s.alpha[1], BigScalar("0.55705817203203450694")) < BigScalar("1e-19"));
    for (int n = 0; n <= 8; ++n) {
        CHECK(s.coeffs[n][static_cast<size_t>(n)] == BigScalar(1));
        for (int j = n - 1; j >= 0; j -= 2) CHECK(s.coeffs[n][static_cast<size_t>(j)].is_zero());
        CHECK(s.gamma[n] > BigScalar(0));
    }
}

TEST_CASE("Hankel determinants reproduce the recurrence polynomials") {
    for (const char* qs : {"0.3", "0.5", "0.7"}) {
        QContext ctx = desk(qs, 1024, 8);
        for (const Shift& c : {Shift::one(), Shift::value("0.8")}) {
            MonicPolySeq s = build_polys(c, 6, ctx);
            MomentTable m = compute_moments(c, 12, ctx);
            auto g = ctx.scope();
            for (int n = 0; n <= 6; ++n) {
                auto h = hankel_poly(m.m, n);
                BigScalar scale(0), diff(0);
                for (int j = 0; j <= n; ++j) {
                    scale = max(scale, abs(h[static_cast<size_t>(j)]));
                    diff = max(diff, abs(h[static_cast<size_t>(j)] - s.coeffs[n][static_cast<size_t>(j)]));
                }
                CHECK(diff / scale < tol());
            }
        }
    }
}

TEST_CASE("orthogonality") {
    QContext ctx = desk("0.5", 1024, 8);
    MonicPolySeq s = build_polys(Shift::one(), 8, ctx);
    OrthogonalityReport r = verify_orthogonality(s, ctx);
    auto g = ctx.scope();
    CHECK(r.max_residual < ctx.trunc_tol() * BigScalar(10));
    CHECK(r.max_diagonal_error < ctx.trunc_tol() * BigScalar(10));

    for (const char* qs : {"0.3", "0.7"}) {
        QContext c2 = desk(qs, 0, 30);
        MonicPolySeq big = build_polys(Shift::value("0.8"), 30, c2);
        OrthogonalityReport r2 = verify_orthogonality(big, c2);
        auto g2 = c2.scope();
        CHECK(big.flags.clean());
        CHECK(r2.max_residual < tol());
    }
}

TEST_CASE("shifts 1 and sqrt(q) give the same family") {
    QContext ctx = desk("0.5", 1024, 12);
    MonicPolySeq a = build_polys(Shift::one(), 12, ctx);
    MonicPolySeq b = build_polys(Shift::sqrt_q(), 12, ctx);
    MonicPolySeq cq = build_polys(Shift::value("0.8").times_q(), 12, ctx);
    MonicPolySeq c = build_polys(Shift::value("0.8"), 12, ctx);
    auto g = ctx.scope();
    for (int n = 0; n <= 12; ++n)
        for (int j = 0; j <= n; ++j) {
            size_t k = static_cast<size_t>(j);
            BigScalar s = max(abs(a.coeffs[n][k]), BigScalar(1));
            CHECK(abs(a.coeffs[n][k] - b.coeffs[n][k]) / s < tol());
            BigScalar s2 = max(abs(c.coeffs[n][k]), BigScalar(1));
            CHECK(abs(c.coeffs[n][k] - cq.coeffs[n][k]) / s2 < tol());
        }
    // norms of the two families differ by the ratio of h_q on the diagonal
    SpecialFunctionSet sf(ctx);
    BigPoint e = polar(BigScalar(1), pi() / BigScalar(4));
    BigPoint h1 = sf.hq_series(e), h2 = sf.hq_series(e * sqrt(ctx.q()));
    CHECK(abs(h1.re) < tol());
    CHECK(abs(h2.re) < tol());
    BigScalar ratio = sqrt(ctx.q()) * h1.im / h2.im;
    CHECK(rel(a.gamma[1] / b.gamma[1], ratio) < tol());
    CHECK(rel(ratio, BigScalar("0.709399368885327")) < BigScalar("1e-14"));
}

TEST_CASE("second-kind function") {
    QContext ctx = desk("0.5", 1024, 8);
    SpecialFunctionSet sf(ctx);
    MonicPolySeq s = build_polys(Shift::one(), 8, ctx);
    auto g = ctx.scope();
    BigPoint z = polar(BigScalar(1000), BigScalar(0.3));
    BigPoint v = second_kind(s, 2, z, Region::Exterior, sf) * pow(z, 3);
    CHECK(rel(v, BigPoint(s.gamma[2])) < BigScalar(0.01));
    BigPoint big(BigScalar(1e6));
    BigPoint v0 = second_kind(s, 0, big, Region::Exterior, sf) * big;
    CHECK(rel(v0, BigPoint(s.gamma[0])) < BigScalar(1e-6));

    BigPoint zi = polar(BigScalar(0.6), BigScalar(1.1));
    BigPoint diff = second_kind(s, 3, zi, Region::Exterior, sf) - second_kind(s, 3, zi, Region::Interior, sf);
    BigPoint pwh = s.eval(3, zi) * sf.weight_w(zi) * sf.hq_series(zi);
    CHECK(rel(diff, pwh) < tol());

    // interior branch has no pole at the lattice point q
    BigScalar eps = ldexp(BigScalar(1), -200);
    auto at = [&](const BigScalar& e) {
        BigPoint up = second_kind(s, 3, BigPoint(ctx.q() * (BigScalar(1) + e)), Region::Interior, sf);
        BigPoint dn = second_kind(s, 3, BigPoint(ctx.q() * (BigScalar(1) - e)), Region::Interior, sf);
        return std::make_pair(up, dn);
    };
    auto [u1, d1] = at(eps);
    auto [u2, d2] = at(eps / BigScalar(2));
    CHECK(abs(u1 - d1) < BigScalar(1e-50));
    CHECK(abs((u1 + d1) - (u2 + d2)) < BigScalar(1e-50));
    CHECK(abs(u1) < BigScalar(1e3));
}

TEST_CASE("ladder identity") {
    for (const char* qs : {"0.3", "0.5"}) {
        QContext ctx = desk(qs, 1024, 10);
        for (const Shift& c : {Shift::one(), Shift::value("0.8")}) {
            MonicPolySeq s = build_polys(c, 10, ctx);
            auto g = ctx.scope();
            for (int n = 3; n <= 10; ++n) CHECK(ladder_check(s, n, ctx) < tol());
            std::vector<BigScalar> bad = s.alpha;
            bad[5] *= BigScalar(1.01);
            CHECK(ladder_check(s, 5, bad, ctx) > BigScalar(1e-6));
        }
    }
}

TEST_CASE("q-difference relation between P_n and P_{n-1}") {
    QContext ctx = desk("0.5", 1024, 10);
    MonicPolySeq s = build_polys(Shift::value("0.8"), 10, ctx);
    auto g = ctx.scope();
    CHECK(pnqdiff_check(s, 2, {BigPoint(BigScalar(0.7))}, ctx) < tol());
    Sampler sm(3);
    std::vector<BigPoint> zs;
    for (int i = 0; i < 5; ++i) zs.push_back(sm.annulus(0.2, 2.0));
    for (int n = 1; n <= 10; ++n) CHECK(pnqdiff_check(s, n, zs, ctx) < tol());
    CHECK(pnqdiff_check(s, 4, {BigPoint()}, ctx).is_zero());
}

TEST_CASE("doubling precision and cutoffs leaves the sequence unchanged") {
    QContext ctx = desk("0.5", 1024, 16);
    QContext fine = ctx.refined();
    MonicPolySeq a = build_polys(Shift::one(), 16, ctx);
    MonicPolySeq b = build_polys(Shift::one(), 16, fine);
    auto g = fine.scope();
    for (int n = 0; n <= 16; ++n) {
        CHECK(rel(a.gamma[n], b.gamma[n]) < ctx.trunc_tol());
        if (n > 0) CHECK(rel(a.alpha[n], b.alpha[n]) < ctx.trunc_tol());
    }
}
