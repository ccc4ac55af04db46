#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include "ztk/height.hpp"

using namespace ztk;

TEST_CASE("height values") {
    RamificationSet S({2});
    CHECK(height_exact(Rat(1), Rat(1), S) == Rat(4));      // (1+1)(1+1)
    CHECK(height_exact(Rat(2), Rat(1, 2), S) == Rat(6));   // (1+1)(1+2)
    CHECK(height(2.0, Rat(1, 2), S) == doctest::Approx(6.0));
    CHECK_THROWS_AS(height_exact(Rat(1), Rat(0), S), Error);

    SUBCASE("[[a * xi]] = [[1 * a xi]] for a in Z_(S)") {
        std::mt19937_64 rng(51);
        RamificationSet S23({2, 3});
        for (int i = 0; i < 300; ++i) {
            i64 a = 1 + i64(rng() % 200);
            while (a % 2 == 0 || a % 3 == 0) ++a;
            Rat xi(i64(rng() % 400) - 200, 1 + i64(rng() % 36));
            if (xi.is_zero()) continue;
            if (!in_s_integers(xi, S23)) continue;
            CHECK(height_exact(Rat(a), xi, S23) == height_exact(Rat(1), Rat(a) * xi, S23));
        }
    }
}

TEST_CASE("large-sum estimator") {
    RamificationSet S({2});
    HeightSumConfig cfg;
    cfg.max_t = 20000;

    SUBCASE("finite, ratio to comparator bounded across a") {
        double prev_ratio = 0;
        for (double a : {1.0, 2.0, 4.0, 8.0}) {
            auto r = height_sum_large(a, 3.0, 0.0, S, cfg);
            CHECK(r.value > 0);
            CHECK(std::isfinite(r.value));
            CHECK(r.tail_bound < 1e-6 * r.value + 1e-12);
            CHECK(r.ratio < 50.0);
            CHECK(r.ratio > 0.01);
            (void)prev_ratio;
            prev_ratio = r.ratio;
        }
    }
    SUBCASE("restricted sum against |a|^{-1} b^{-M+1}") {
        for (double b : {4.0, 16.0}) {
            auto r = height_sum_large(2.0, 3.0, b, S, cfg);
            CHECK(std::isfinite(r.value));
            CHECK(r.ratio < 50.0);
        }
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(height_sum_large(1.0, 1.0, 0.0, S), Error);
        CHECK_THROWS_AS(height_sum_large(0.0, 2.0, 0.0, S), Error);
    }
}

TEST_CASE("small-sum estimator") {
    RamificationSet S({2});
    SUBCASE("empty range below 1") {
        auto r = height_sum_small(1.0, 0.5, 0.5, S);
        CHECK(r.value == 0.0);
        CHECK(r.terms == 0);
    }
    SUBCASE("doubling b grows by at most 2^{1-alpha} polylog") {
        for (double alpha : {0.25, 0.5}) {
            auto r1 = height_sum_small(1.0, 64.0, alpha, S);
            auto r2 = height_sum_small(1.0, 128.0, alpha, S);
            CHECK(r1.value > 0);
            CHECK(r2.value >= r1.value);
            double polylog = std::pow(std::log(128.0) / std::log(64.0), 1.0);
            CHECK(r2.value / r1.value <= std::pow(2.0, 1.0 - alpha) * polylog * 1.5);
        }
    }
    SUBCASE("ratio to comparator bounded") {
        for (double a : {1.0, 2.0, 4.0}) {
            for (double b : {16.0, 64.0}) {
                auto r = height_sum_small(a, b, 0.5, S);
                CHECK(r.ratio < 20.0);
            }
        }
    }
    SUBCASE("alpha >= 1 rejected") {
        CHECK_THROWS_AS(height_sum_small(1.0, 4.0, 1.0, S), Error);
    }
}
