#pragma once

#include "ztk/sring.hpp"

namespace ztk {

// [[a * xi]] = (1 + |a xi|_oo) prod_i (1 + |xi|_{q_i}); exact when a is rational.
inline Rat height_exact(const Rat& a, const Rat& xi, const RamificationSet& S) {
    if (xi.is_zero()) throw Error("height: xi = 0 has no finite q-adic norms");
    Rat out = Rat(1) + (a * xi).abs();
    for (i64 q : S.primes())
        out *= Rat(1) + rat_pow_prime(q, -valuation(xi, q)).abs();
    return out;
}

inline double height(double a, const Rat& xi, const RamificationSet& S) {
    if (xi.is_zero()) throw Error("height: xi = 0");
    double out = 1.0 + std::abs(a * xi.to_double());
    for (i64 q : S.primes())
        out *= 1.0 + std::pow(double(q), -double(valuation(xi, q)));
    return out;
}

// Enumeration of xi in Z^S - {0} as t / q^w with w_i in [0, U], t a nonzero
// integer not divisible by q_i whenever w_i > 0, |t| <= T.
struct HeightSumConfig {
    int max_denom_exp = 12; // U
    i64 max_t = 100000;     // T
};

struct HeightSumResult {
    double value = 0;
    double tail_bound = 0;  // certified bound on the truncated |t| > T mass
    double comparator = 0;  // the lemma's comparison quantity (at eps = 0)
    double ratio = 0;       // value / comparator, reported not asserted
    i64 terms = 0;
};

namespace detail_height {

// iterate over denominator exponent vectors w in [0,U]^r
inline bool next_vec(std::vector<int>& w, int U) {
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] < U) {
            ++w[i];
            for (size_t j = 0; j < i; ++j) w[j] = 0;
            return true;
        }
    }
    return false;
}

} // namespace detail_height

// sum over xi != 0 of [[a * xi]]^{-M}, optionally restricted to
// [[a * xi]] >= threshold; comparator |a|^{-M} (or |a|^{-1} b^{-M+1}).
inline HeightSumResult height_sum_large(double a, double M, double threshold,
                                        const RamificationSet& S,
                                        const HeightSumConfig& cfg = {}) {
    if (M <= 1.0) throw Error("height_sum_large: requires M > 1");
    if (a == 0) throw Error("height_sum_large: a must be nonzero");
    HeightSumResult out;
    size_t r = S.size();
    std::vector<int> w(r, 0);
    double abs_a = std::abs(a);
    do {
        Rat qw(1);
        double qprod = 1; // prod (1 + q^w)
        bool ok = true;
        for (size_t i = 0; i < r; ++i) {
            Rat p = rat_pow_prime(S.primes()[i], w[i]);
            if (p.num() > (i64(1) << 40)) { ok = false; break; }
            qw *= p;
            qprod *= 1.0 + p.to_double();
        }
        if (!ok) continue;
        double qwd = qw.to_double();
        for (i64 t = 1; t <= cfg.max_t; ++t) {
            bool reduced = true;
            for (size_t i = 0; i < r; ++i)
                if (w[i] > 0 && t % S.primes()[i] == 0) { reduced = false; break; }
            if (!reduced) continue;
            // xi = +- t / q^w
            double h = (1.0 + abs_a * double(t) / qwd) * qprod;
            if (h < threshold) continue;
            out.value += 2.0 * std::pow(h, -M);
            out.terms += 2;
        }
        // tail over |t| > T for this w: 2 sum (|a| t / q^w * qprod)^{-M}
        double scale = abs_a / qwd * qprod;
        out.tail_bound += 2.0 * std::pow(scale, -M) *
                          std::pow(double(cfg.max_t), 1.0 - M) / (M - 1.0);
    } while (detail_height::next_vec(w, cfg.max_denom_exp));
    out.comparator = (threshold > 1.0)
                         ? std::pow(abs_a, -1.0) * std::pow(threshold, -M + 1.0)
                         : std::pow(abs_a, -M);
    out.ratio = out.value / out.comparator;
    return out;
}

// sum over [[a * xi]] <= b of [[a * xi]]^{-alpha}; finite, exact enumeration.
// comparator b^{1-alpha} a^{-1} log^r b.
inline HeightSumResult height_sum_small(double a, double b, double alpha,
                                        const RamificationSet& S,
                                        const HeightSumConfig& cfg = {}) {
    if (alpha >= 1.0) throw Error("height_sum_small: requires alpha < 1");
    if (a == 0) throw Error("height_sum_small: a must be nonzero");
    HeightSumResult out;
    if (b < 1.0) return out; // heights are >= 1: empty range
    size_t r = S.size();
    std::vector<int> w(r, 0);
    double abs_a = std::abs(a);
    do {
        double qwd = 1, qprod = 1;
        bool feasible = true;
        for (size_t i = 0; i < r; ++i) {
            qwd *= std::pow(double(S.primes()[i]), w[i]);
            qprod *= 1.0 + std::pow(double(S.primes()[i]), w[i]);
            if (qprod > b) { feasible = false; break; }
        }
        if (!feasible) continue; // larger w in this direction only grow qprod
        // (1 + |a| t/q^w) qprod <= b  =>  t <= (b/qprod - 1) q^w / |a|
        double tmax = (b / qprod - 1.0) * qwd / abs_a;
        i64 tcap = i64(std::min(double(cfg.max_t), std::floor(tmax)));
        for (i64 t = 1; t <= tcap; ++t) {
            bool reduced = true;
            for (size_t i = 0; i < r; ++i)
                if (w[i] > 0 && t % S.primes()[i] == 0) { reduced = false; break; }
            if (!reduced) continue;
            double h = (1.0 + abs_a * double(t) / qwd) * qprod;
            if (h > b) continue;
            out.value += 2.0 * std::pow(h, -alpha);
            out.terms += 2;
        }
    } while (detail_height::next_vec(w, cfg.max_denom_exp));
    double logb = std::max(std::log(b), 1.0);
    out.comparator = std::pow(b, 1.0 - alpha) / abs_a * std::pow(logb, double(r));
    out.ratio = out.comparator > 0 ? out.value / out.comparator : 0.0;
    return out;
}

} // namespace ztk
