#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include "ztk/kloosterman.hpp"

using namespace ztk;

TEST_CASE("classical Kloosterman sums") {
    CHECK(std::abs(classical_kloosterman(1, 1, 2) - cplx(1)) < 1e-14);
    CHECK(std::abs(classical_kloosterman(1, 1, 5) -
                   (2.0 + 2.0 * std::cos(4 * M_PI / 5))) < 1e-12);
    for (i64 c : {1, 2, 6, 12, 30}) {
        double phi = 0;
        for (i64 x = 1; x <= c; ++x)
            if (std::gcd(x, c) == 1) phi += 1;
        if (c == 1) phi = 1;
        CHECK(std::abs(classical_kloosterman(0, 0, c) - phi) < 1e-12);
    }
    SUBCASE("Weil bound at prime powers, divisor bound in general") {
        std::mt19937_64 rng(31);
        for (i64 c = 1; c <= 150; ++c) {
            bool odd_prime_power = c % 2 == 1 && (c == 1 || factorize(c).size() == 1);
            for (int i = 0; i < 8; ++i) {
                i64 a = i64(rng() % (2 * c + 1)) - c;
                i64 b = i64(rng() % (2 * c + 1)) - c;
                double v = std::abs(classical_kloosterman(a, b, c));
                // constant 2 at odd prime powers (the case the sums feed),
                // tau(c) sqrt(gcd) sqrt(c) for every modulus
                if (odd_prime_power) CHECK(v <= weil_bound(a, b, c) + 1e-9);
                CHECK(v <= weil_bound(a, b, c) / 2.0 * double(num_divisors(c)) + 1e-9);
            }
        }
        // S(-1,-47;56): the constant 2 fails off prime powers
        CHECK(std::abs(classical_kloosterman(-1, -47, 56)) > weil_bound(-1, -47, 56));
    }
}

TEST_CASE("local generalized Kloosterman sums") {
    CHECK(std::abs(local_kl(LocalKlParams(3, 1, 0, Rat(0), Rat(1))) - cplx(-1)) < 1e-13);
    CHECK(std::abs(local_kl(LocalKlParams(7, 0, 0, Rat(3), Rat(2))) - cplx(1)) < 1e-13);
    CHECK(std::abs(local_kl(LocalKlParams(5, 0, 1, Rat(0), Rat(0))) - cplx(5)) < 1e-12);
    CHECK_THROWS_AS(LocalKlParams(2, 1, 0, Rat(0), Rat(1)), Error);
    CHECK_THROWS_AS(LocalKlParams(3, 1, 0, Rat(1, 3), Rat(1)), Error);

    SUBCASE("depends only on xi, m mod l^{u+2v}") {
        std::mt19937_64 rng(33);
        for (int trial = 0; trial < 60; ++trial) {
            i64 ell = std::vector<i64>{3, 5, 7}[rng() % 3];
            int u = int(rng() % 3), v = int(rng() % 2);
            i64 mod = 1;
            for (int i = 0; i < u + 2 * v; ++i) mod *= ell;
            Rat xi(i64(rng() % 50) - 25, 1 + 2 * i64(rng() % 3));
            Rat m(i64(rng() % 50) - 25, 1 + 2 * i64(rng() % 3));
            if (valuation(xi, ell) < 0 || valuation(m, ell) < 0) continue;
            i64 t1 = i64(rng() % 5) - 2, t2 = i64(rng() % 5) - 2;
            cplx a = local_kl(LocalKlParams(ell, u, v, xi, m));
            cplx b = local_kl(LocalKlParams(ell, u, v, xi + Rat(mod) * Rat(t1),
                                            m + Rat(mod) * Rat(t2)));
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("global sums and CRT factorization") {
    RamificationSet S({2});
    SUBCASE("k = f = 1 gives 1") {
        KlParams p(1, 1, Rat(7, 2), Rat(3), S);
        CHECK(std::abs(global_kl(p) - cplx(1)) < 1e-14);
    }
    SUBCASE("k = 15: direct sum equals the product of locals at 3 and 5") {
        KlParams p(15, 1, Rat(1), Rat(1), S);
        auto fac = crt_factorize(p);
        REQUIRE(fac.factors.size() == 2);
        CHECK(fac.factors[0].ell == 3);
        CHECK(fac.factors[1].ell == 5);
        CHECK(std::abs(fac.product - global_kl(p)) < 1e-12);
    }
    SUBCASE("periodicity in xi") {
        KlParams p(9, 1, Rat(2), Rat(5), S);
        KlParams q(9, 1, Rat(2 + 9), Rat(5), S);
        CHECK(std::abs(global_kl(p) - global_kl(q)) < 1e-12);
    }
    SUBCASE("conjugation symmetry") {
        std::mt19937_64 rng(37);
        for (int t = 0; t < 30; ++t) {
            i64 k = 1 + 2 * i64(rng() % 12);
            i64 f = 1 + 2 * i64(rng() % 3);
            Rat xi(i64(rng() % 40) - 20, 1);
            Rat m(i64(rng() % 40) - 20, 1);
            KlParams p(k, f, xi, m, S);
            KlParams pc(k, f, -xi, m, S);
            CHECK(std::abs(global_kl(pc) - std::conj(global_kl(p))) < 1e-12);
        }
    }
    SUBCASE("CRT equality on random parameters") {
        std::mt19937_64 rng(39);
        int done = 0;
        while (done < 60) {
            i64 k = 1 + 2 * i64(rng() % 40);
            i64 f = 1 + 2 * i64(rng() % 5);
            if (i128(k) * f * f > 3000) continue;
            Rat xi(i64(rng() % 200) - 100, i64(1) << (rng() % 3));
            Rat m(i64(rng() % 200) - 100, i64(1) << (rng() % 3));
            KlParams p(k, f, xi, m, S);
            cplx g = global_kl(p);
            cplx c = crt_factorize(p).product;
            REQUIRE(std::abs(g - c) <= 1e-9 * (1.0 + std::abs(g)));
            ++done;
        }
    }
    SUBCASE("invariant gates") {
        CHECK_THROWS_AS(KlParams(2, 1, Rat(1), Rat(1), S), Error);
        CHECK_THROWS_AS(KlParams(3, 1, Rat(1, 5), Rat(1), S), Error);
    }
}

TEST_CASE("local bound predicate") {
    RamificationSet S({2});
    SUBCASE("unit xi at the boundary case") {
        // u=1, v=0, m unit, xi unit, l=7: threshold u-1 = 0 = v(xi), bound sqrt(7)
        LocalKlParams p(7, 1, 0, Rat(1), Rat(1));
        auto r = bound_local(p, S);
        CHECK(r.case_id == 2);
        CHECK(r.bound == doctest::Approx(std::sqrt(7.0)));
        CHECK(r.respected);
    }
    SUBCASE("insolvable congruence forces zero") {
        // 4m = 8 with v = 1, l = 3: x^2 = 8 (9) insolvable
        LocalKlParams p(3, 0, 1, Rat(0), Rat(2));
        auto r = bound_local(p, S);
        CHECK(r.abs_value < 1e-12);
    }
    SUBCASE("vanishing case is exact across a grid") {
        for (i64 ell : {3, 5}) {
            for (int u = 0; u <= 2; ++u) {
                for (int v = 0; v <= 1; ++v) {
                    for (i64 xi = 0; xi < ell * ell; ++xi) {
                        for (i64 m : {0LL, 1LL, (long long)ell, 4LL}) {
                            LocalKlParams p(ell, u, v, Rat(xi), Rat(m));
                            auto r = bound_local(p, S);
                            if (r.case_id == 3) REQUIRE(r.vanishes_exactly);
                            REQUIRE(r.respected);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("global bound predicate") {
    RamificationSet S({2});
    SUBCASE("k = f = 1: bound at least |Kl| = 1") {
        KlParams p(1, 1, Rat(1), Rat(1), S);
        auto r = bound_global(p);
        CHECK(r.gate);
        CHECK(r.bound >= 1.0);
        CHECK(r.respected);
    }
    SUBCASE("failed divisibility gate forces exact vanishing (k <= 60)") {
        std::mt19937_64 rng(41);
        int gated = 0;
        for (int t = 0; t < 400; ++t) {
            i64 k = 1 + 2 * i64(rng() % 30);
            i64 f = 1 + 2 * i64(rng() % 2);
            Rat xi(i64(rng() % 60) - 30, 1);
            Rat m(i64(rng() % 60) - 30, 1);
            KlParams p(k, f, xi, m, S);
            auto r = bound_global(p);
            if (!r.gate && r.gcd_square) {
                ++gated;
                REQUIRE(r.vanishes_exactly);
            }
            if (!r.gcd_square) REQUIRE(r.vanishes_exactly);
        }
        CHECK(gated > 10);
    }
    SUBCASE("non-square gcd(m^(q), f^2) with insolvable congruence") {
        // f = 3, m = 3: gcd(3, 9) = 3, not a square; x^2 = 12 (9) insolvable
        KlParams p(1, 3, Rat(1), Rat(3), S);
        auto r = bound_global(p);
        CHECK(!r.gcd_square);
        CHECK(r.vanishes_exactly);
    }
}
