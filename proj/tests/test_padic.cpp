#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include "ztk/padic_integral.hpp"

using namespace ztk;

TEST_CASE("modified norm") {
    CHECK(modified_norm(Rat(3), 3) == Rat(1));
    CHECK(modified_norm(Rat(3), 2) == Rat(4));
    CHECK(modified_norm(Rat(2), 2) == Rat(4));
    CHECK(modified_norm(Rat(25), 5) == Rat(1, 25));
    CHECK(modified_norm(Rat(1, 4), 2) == Rat(4));
    CHECK_THROWS_AS(modified_norm(Rat(0), 3), Error);

    SUBCASE("invariant under units congruent to 1 mod l^2") {
        std::mt19937_64 rng(3);
        for (i64 ell : {2, 3, 5, 7}) {
            for (int i = 0; i < 200; ++i) {
                Rat y(i64(rng() % 2000) - 1000, 1 + i64(rng() % 50));
                if (y.is_zero()) continue;
                Rat a = Rat(1) + Rat(ell * ell) * Rat(i64(rng() % 20) - 10);
                if (a.is_zero()) continue;
                CHECK(modified_norm(a * y, ell) == modified_norm(y, ell));
            }
        }
    }
    SUBCASE("comparison with the plain norm") {
        std::mt19937_64 rng(4);
        for (i64 ell : {2, 3, 5}) {
            Rat c2 = (ell == 2) ? Rat(8) : Rat(ell);
            for (int i = 0; i < 300; ++i) {
                Rat y(i64(rng() % 4000) - 2000, 1 + i64(rng() % 64));
                if (y.is_zero()) continue;
                Rat plain = rat_pow_prime(ell, -valuation(y, ell));
                Rat mod = modified_norm(y, ell);
                CHECK(plain <= mod);
                CHECK(mod <= c2 * plain);
            }
        }
    }
    SUBCASE("PadicApprox overload agrees") {
        for (i64 ell : {2, 3, 5}) {
            for (i64 n : {1, 2, 3, 4, 5, 6, 7, 12, 45, -45, 99}) {
                auto x = PadicApprox::from_rat(Rat(n), ell);
                CHECK(modified_norm(x) == modified_norm(Rat(n), ell));
            }
        }
    }
}

TEST_CASE("fractional part and additive character") {
    CHECK(frac_part(Rat(1, 3), 3) == Rat(1, 3));
    CHECK(frac_part(Rat(5, 4), 2) == Rat(1, 4));
    CHECK(frac_part(Rat(2), 3) == Rat(0));
    CHECK(frac_part(Rat(-1, 9), 3) == Rat(8, 9));

    SUBCASE("x - <x>_l is l-integral") {
        std::mt19937_64 rng(5);
        for (i64 ell : {2, 3, 5, 7}) {
            for (int i = 0; i < 300; ++i) {
                Rat x(i64(rng() % 4000) - 2000, 1 + i64(rng() % 200));
                Rat diff = x - frac_part(x, ell);
                CHECK(valuation(diff, ell) >= 0);
            }
        }
    }

    CHECK(std::abs(e_ell(Rat(2), 3) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(e_ell(Rat(1, 2), 2) - cplx(-1, 0)) < 1e-15);
    CHECK(std::abs(e_ell(Rat(1, 3), 3) * e_ell(Rat(2, 3), 3) - cplx(1, 0)) < 1e-15);

    SUBCASE("e_l is a character") {
        std::mt19937_64 rng(6);
        for (i64 ell : {2, 3, 5}) {
            for (int i = 0; i < 200; ++i) {
                Rat x(i64(rng() % 600) - 300, 1 + i64(rng() % 81));
                Rat y(i64(rng() % 600) - 300, 1 + i64(rng() % 81));
                cplx lhs = e_ell(x + y, ell);
                cplx rhs = e_ell(x, ell) * e_ell(y, ell);
                CHECK(std::abs(lhs - rhs) < 1e-12);
                CHECK(std::abs(std::abs(e_ell(x, ell)) - 1.0) < 1e-12);
            }
        }
    }
}

TEST_CASE("PadicApprox arithmetic") {
    auto a = PadicApprox::from_rat(Rat(5), 3);
    auto b = PadicApprox::from_rat(Rat(-5 + 729), 3); // cancels 5 to depth 6
    auto sum = a + b;
    CHECK(sum.val() == 6);
    CHECK(sum.unit_mod(1) == 1);
    CHECK(sum.precision() < a.precision()); // cancellation costs digits
    auto z = a + PadicApprox::from_rat(Rat(-5), 3);
    CHECK(z.is_zero());
    auto prod = a * PadicApprox::from_rat(Rat(7, 9), 3);
    CHECK(prod.val() == -2);
    CHECK(prod.agrees_with(PadicApprox::from_rat(Rat(35, 9), 3)));
}

TEST_CASE("Hensel square roots") {
    SUBCASE("2 is a square in Q_7") {
        auto r = sqrt_padic(Rat(2), 7, 3);
        REQUIRE(r.has_value());
        i64 u = r->unit_mod(3);
        CHECK((u == 108 || u == 343 - 108));
        CHECK((i128(u) * u - 2) % 343 == 0);
    }
    SUBCASE("trivial and missing roots") {
        for (i64 ell : {3, 5, 7, 11}) {
            auto r = sqrt_padic(Rat(1), ell);
            REQUIRE(r.has_value());
            CHECK(r->unit_mod(1) == 1);
            CHECK(r->val() == 0);
        }
        CHECK(!sqrt_padic(Rat(2), 3).has_value());
        CHECK(!sqrt_padic(Rat(3), 2).has_value());   // 3 = 3 mod 8
        CHECK(!sqrt_padic(Rat(12), 3).has_value());  // odd valuation
    }
    SUBCASE("root squares back to N mod l^prec, exactly") {
        std::mt19937_64 rng(8);
        for (i64 ell : {2, 3, 5, 7, 13}) {
            int prec = PadicApprox::clamp_prec(ell, 32);
            int found = 0;
            for (int i = 0; i < 400 && found < 40; ++i) {
                i64 n = i64(rng() % 100000) + 1;
                Rat N = Rat(n) * rat_pow_prime(ell, 2 * i64(rng() % 3));
                auto r = sqrt_padic(N, ell, prec);
                if (!r) continue;
                ++found;
                PadicApprox sq = *r * *r;
                PadicApprox target = PadicApprox::from_rat(N, ell, prec);
                REQUIRE(sq.agrees_with(target));
            }
            CHECK(found > 0);
        }
    }
}

TEST_CASE("omega_l") {
    CHECK(omega_ell(Rat(0), Rat(-1), 3) == 1);        // (4|3) = 1
    CHECK(omega_from_t(Rat(3), 3) == 0);              // odd valuation
    CHECK_THROWS_AS(omega_ell(Rat(2), Rat(1), 3), Error); // y^2 = 4N

    SUBCASE("squares give +1") {
        std::mt19937_64 rng(9);
        for (i64 ell : {3, 5, 7}) {
            for (int i = 0; i < 100; ++i) {
                i64 t = 1 + i64(rng() % 1000);
                while (t % ell == 0) ++t;
                CHECK(omega_from_t(Rat(t * t), ell) == 1);
            }
        }
    }
    SUBCASE("rational and p-adic evaluations agree") {
        std::mt19937_64 rng(10);
        for (i64 ell : {2, 3, 5}) {
            for (int i = 0; i < 200; ++i) {
                Rat t(i64(rng() % 8000) - 4000, 1 + i64(rng() % 9));
                if (t.is_zero()) continue;
                CHECK(omega_from_t(t, ell) ==
                      omega_from_t(PadicApprox::from_rat(t, ell)));
            }
        }
    }
}

TEST_CASE("Gauss sums") {
    CHECK(std::abs(gauss_sum(3, 1) - e_rat(Rat(1, 3))) < 1e-14);
    CHECK(std::abs(gauss_sum(3, -1) - e_rat(Rat(2, 3))) < 1e-14);
    for (i64 ell : {3, 5, 7, 11, 13}) {
        cplx gp = gauss_sum(ell, 1), gm = gauss_sum(ell, -1);
        CHECK(std::abs(gp + gm + 1.0) < 1e-12);
        CHECK(std::abs(std::abs(gp - gm) - std::sqrt(double(ell))) < 1e-12);
    }
    CHECK_THROWS_AS(gauss_sum(2, 1), Error);
}

TEST_CASE("brute-force l-adic integration") {
    for (i64 ell : {2, 3, 5}) {
        cplx vol = padic_integrate(ell, 6, [](const Rat&) { return cplx(1); });
        CHECK(std::abs(vol - 1.0) < 1e-14);
        cplx units = padic_integrate(ell, 6, [&](const Rat& a) {
            return cplx(a.num() % ell != 0 ? 1 : 0);
        });
        CHECK(std::abs(units - (1.0 - 1.0 / double(ell))) < 1e-14);
    }
    // int_{Z_3} |y|_3 dy = (1 - 1/3)/(1 - 3^{-2}) = 3/4, truncation error ~ 3^{-2D}
    cplx norm_int = padic_integrate(3, 10, [](const Rat& a) {
        if (a.is_zero()) return cplx(0); // deepest class, measure-negligible
        return cplx(std::pow(3.0, -double(valuation(a, 3))));
    });
    CHECK(std::abs(norm_int - 0.75) < 1e-8);
}

TEST_CASE("singular integral: closed form") {
    SUBCASE("eta = 0 shell sum, hand value") {
        LocalSingularParams p;
        p.s = 0;
        p.eta = Rat(0);
        p.N = Rat(1);
        p.ell = 3;
        p.epsilon = 0;
        auto r = j_singular(p);
        CHECK(r.L == 5); // auto: smallest >= 4 with L != nu mod 2
        CHECK(std::abs(r.value - 1.0 / 324.0) < 1e-14);
        CHECK(r.terms.size() == 1);
        CHECK(r.terms[0].geometric);
    }
    SUBCASE("eta = 0, eps = +-1: single geometric term (1/2)(1-1/l) l^{-L(1+s/2)} l^{-nu s/2}/(1-l^{-2-s})") {
        for (int eps : {-1, 1}) {
            LocalSingularParams p;
            p.s = cplx(0.7, 0.3);
            p.eta = Rat(0);
            p.N = Rat(4); // nu = 0
            p.ell = 5;
            p.epsilon = eps;
            auto r = j_singular(p);
            CHECK(r.L == 4);
            REQUIRE(r.terms.size() == 1);
            cplx expected = 0.5 * (1.0 - 0.2) *
                            std::exp((p.s / 2.0) * std::log(std::pow(5.0, -4.0))) *
                            std::pow(5.0, -4.0) /
                            (1.0 - std::pow(cplx(5.0), -2.0 - p.s));
            CHECK(std::abs(r.value - expected) < 1e-12);
        }
    }
    SUBCASE("guards") {
        LocalSingularParams p;
        p.s = 0;
        p.eta = Rat(0);
        p.N = Rat(2); // non-residue mod 3
        p.ell = 3;
        CHECK_THROWS_AS(j_singular(p), Error);
        p.N = Rat(1);
        p.ell = 2;
        CHECK_THROWS_AS(j_singular(p), Error);
        p.ell = 3;
        p.L = 4; // wrong parity for eps = 0 (nu = 0 wants odd L)
        CHECK_THROWS_AS(j_singular(p), Error);
        p.L = 5;
        p.s = cplx(-2.5, 0);
        CHECK_THROWS_AS(j_singular(p), Error);
    }
}

TEST_CASE("singular integral: closed form vs brute force") {
    // sweep: primes, epsilon, nu, sigma, |eta| from l^-3 to l^(L+2)
    for (i64 ell : {3, 5}) {
        for (int nu : {0, 1}) {
            Rat N = Rat(4) * rat_pow_prime(ell, 2 * nu); // 4 is a square everywhere
            for (int eps : {-1, 0, 1}) {
                LocalSingularParams base;
                base.N = N;
                base.ell = ell;
                base.epsilon = eps;
                int L = detail::auto_cutoff(eps, nu);
                for (double sigma : {-1.0, 0.0, 1.5}) {
                    base.s = cplx(sigma, 0.4);
                    for (int w = -3; w <= L + 2; ++w) {
                        for (i64 unit : {1, 2}) {
                            if (unit % ell == 0) continue;
                            base.eta = Rat(unit) * rat_pow_prime(ell, -w);
                            auto closed = j_singular(base);
                            REQUIRE(closed.terms.size() <= 3);
                            double tail = 0;
                            cplx ref = j_singular_reference(base, 9, &tail);
                            REQUIRE(std::abs(closed.value - ref) <= tail + 1e-12);
                        }
                    }
                    // eta = 0
                    base.eta = Rat(0);
                    double tail = 0;
                    cplx ref = j_singular_reference(base, 9, &tail);
                    auto closed = j_singular(base);
                    REQUIRE(std::abs(closed.value - ref) <= tail + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("singular integral: uniform magnitude bound") {
    // |J(s,eta)| (1+|eta|)^{1+sigma/2} stays bounded over |eta| in [l^-3, l^6]
    for (i64 ell : {3, 5}) {
        for (double sigma : {-1.0, 0.0, 1.0, 2.0}) {
            double worst = 0;
            for (int eps : {-1, 0, 1}) {
                LocalSingularParams p;
                p.N = Rat(1);
                p.ell = ell;
                p.epsilon = eps;
                p.s = cplx(sigma, 0);
                for (int w = -3; w <= 6; ++w) {
                    p.eta = rat_pow_prime(ell, -w);
                    worst = std::max(worst, j_singular(p).bound_constant);
                }
            }
            // the constant depends on sigma, l, nu, L; measured, not pinned
            CHECK(worst < 100.0);
            CHECK(worst > 0.0);
        }
    }
}
