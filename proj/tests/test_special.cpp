#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ztk/special.hpp"

using namespace ztk;

TEST_CASE("complex log-gamma") {
    // lgamma against known values
    CHECK(std::abs(std::exp(lgamma_complex(cplx(5))) - 24.0) < 1e-12);
    CHECK(std::abs(std::exp(lgamma_complex(cplx(0.5))) - std::sqrt(M_PI)) < 1e-13);
    // reflection zone
    cplx g = std::exp(lgamma_complex(cplx(-1.5)));
    CHECK(std::abs(g - 4.0 * std::sqrt(M_PI) / 3.0) < 1e-12);
    // ratio with large imaginary parts stays finite and matches conjugation
    cplx r = gamma_ratio(cplx(0.5, 20), cplx(1.5, 20));
    CHECK(std::abs(r) < 1.0);
    CHECK(std::abs(r - 1.0 / cplx(0.5, 20)) < 1e-10); // Gamma(z+1) = z Gamma(z)
    CHECK_THROWS_AS(gamma_ratio(cplx(-2.0), cplx(1.0)), Error);
}

TEST_CASE("bessel K at 2") {
    SUBCASE("K_{1/2}(2) closed form") {
        cplx k = bessel_k2(cplx(0.5)).value;
        double expect = 0.5 * std::sqrt(M_PI) * std::exp(-2.0);
        CHECK(std::abs(k - expect) < 1e-12);
    }
    SUBCASE("even in the order") {
        for (cplx s : {cplx(0.3, 0.2), cplx(1.5, 3.0), cplx(2.0, 17.0)}) {
            cplx a = bessel_k2(s).value, b = bessel_k2(-s).value;
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
        }
    }
    SUBCASE("two independent step sizes agree (integral path)") {
        cplx a = detail_sf::bessel_k2_integral(cplx(1.2, 2.0), 0.01);
        cplx b = detail_sf::bessel_k2_integral(cplx(1.2, 2.0), 0.0025);
        CHECK(std::abs(a - b) < 1e-10);
    }
    SUBCASE("series and integral paths agree near the handover") {
        for (double t : {3.0, 3.9}) {
            cplx s(1.0, t);
            cplx integral = detail_sf::bessel_k2_integral(s, 0.004);
            cplx series = 0.5 * M_PI *
                          (detail_sf::bessel_i2(-s) - detail_sf::bessel_i2(s)) /
                          std::sin(M_PI * s);
            CHECK(std::abs(integral - series) < 1e-11 * (1 + std::abs(series)));
        }
    }
}

TEST_CASE("F and its Mellin transform") {
    SUBCASE("normalization and symmetry") {
        CHECK(F_of(1e-9).value.real() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(F_of(1.0).value.real() == doctest::Approx(0.5).epsilon(1e-11));
        CHECK(F_of(40.0).value.real() < 1e-17);
    }
    SUBCASE("range [0,1] on x in [1e-4, 50], strictly decreasing where resolvable") {
        for (double lx = -4; lx <= 1.7; lx += 0.05) {
            double v = F_of(std::pow(10.0, lx)).value.real();
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-12);
        }
        // below x ~ 0.04 the drop from 1 is under 1e-12; start where doubles see it
        double prev = 2.0;
        for (double lx = -1; lx <= 1.7; lx += 0.05) {
            double v = F_of(std::pow(10.0, lx)).value.real();
            CHECK(v < prev);
            prev = v;
        }
    }
    SUBCASE("F~ odd, pole data at 0") {
        for (cplx s : {cplx(0.5, 0.0), cplx(1.0, 2.0), cplx(0.25, -3.0)}) {
            CHECK(std::abs(mellin_F(s) + mellin_F(-s)) < 1e-11);
        }
        auto l0 = mellin_F_laurent0();
        CHECK(std::abs(l0.residue - 1.0) < 1e-15);
        CHECK(std::abs(l0.finite_part) < 1e-15);
    }
    SUBCASE("numerical Mellin matches K_s(2)/(s K_0(2))") {
        for (cplx s : {cplx(0.5), cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
            auto direct = mellin_of_F_numeric(s);
            cplx closed = mellin_F(s);
            CHECK(std::abs(direct.value - closed) < 1e-8 + direct.error);
        }
    }
    SUBCASE("rapid decay shape |F~(sigma+it)| <= C |s|^{|sigma|-1} e^{-pi|t|/2}") {
        for (double sigma : {0.5, 1.0, 2.0}) {
            double worst = 0;
            for (double t = 0.5; t <= 40.0; t += 0.5) {
                cplx s(sigma, t);
                double bound = std::pow(std::abs(s), std::abs(sigma) - 1.0) *
                               std::exp(-M_PI * t / 2.0);
                worst = std::max(worst, std::abs(mellin_F(s)) / bound);
            }
            CHECK(worst < 50.0);
        }
    }
}

TEST_CASE("V function") {
    std::vector<i64> qs{2};
    std::vector<int> eps{1};

    SUBCASE("contour admissibility guards") {
        CHECK_THROWS_AS(VFunc(0, eps, qs, cplx(1.0), ContourSpec{-0.5, 40, 0.05}), Error);
        CHECK_THROWS_AS(VFunc(0, eps, qs, cplx(2.0), ContourSpec{0.5, 40, 0.05}), Error);
        CHECK_NOTHROW(VFunc(0, eps, qs, cplx(2.0), ContourSpec{1.5, 40, 0.05}));
    }
    SUBCASE("contour-shift invariance") {
        VFunc a(0, eps, qs, cplx(1.0), ContourSpec{0.8, 40, 0.05});
        VFunc b(0, eps, qs, cplx(1.0), ContourSpec{1.9, 40, 0.05});
        for (double x : {0.25, 1.0, 3.0, 10.0}) {
            CHECK(std::abs(a(x) - b(x)) < 1e-8);
        }
        VFunc c(1, {-1}, qs, cplx(1.0), ContourSpec{0.7, 40, 0.04});
        VFunc d(1, {-1}, qs, cplx(1.0), ContourSpec{1.6, 40, 0.05});
        for (double x : {0.5, 2.0, 8.0}) CHECK(std::abs(c(x) - d(x)) < 1e-8);
    }
    SUBCASE("rapid decay as x grows") {
        VFunc v(0, eps, qs, cplx(1.0), ContourSpec{4.0, 40, 0.05});
        double a = std::abs(v(25.0)), b = std::abs(v(50.0)), c = std::abs(v(100.0));
        // each doubling beats x^-6: super-polynomial onset
        CHECK(b / a < std::pow(2.0, -6.0));
        CHECK(c / b < std::pow(2.0, -6.0));
        CHECK(c < 1e-11);
    }
    SUBCASE("Mellin transform of V matches the closed form") {
        // direct quadrature of int x^{s0-1} V(x) dx via x = e^y against
        // F~(s0) prod (1-eps q^{s0-1})/(1-eps q^{-s0}) Gamma-ratio pi^{1/2-s0}
        VFunc v(1, {-1}, qs, cplx(1.0), ContourSpec{1.3, 40, 0.04});
        for (double s0 : {0.75, 1.5, 2.5}) {
            cplx direct = 0;
            double h = 0.02;
            for (double y = -26.0 / s0; y <= 6.0; y += h)
                direct += std::exp(s0 * y) * v(std::exp(y));
            direct *= h;
            cplx closed = mellin_V_closed(1, {-1}, qs, cplx(s0));
            CHECK(std::abs(direct - closed) < 2e-6 * (1.0 + std::abs(closed)));
        }
    }
}
