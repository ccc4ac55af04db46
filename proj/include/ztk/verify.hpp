#pragma once

#include <chrono>
#include <future>
#include <random>
#include <sstream>
#include "ztk/config.hpp"
#include "ztk/height.hpp"
#include "ztk/padic_integral.hpp"
#include "ztk/sigma_square.hpp"

namespace ztk {

struct SuiteResult {
    std::string name;
    bool pass = false;
    double margin = 0;  // worst measured error / ratio, suite-specific
    double seconds = 0;
    std::vector<std::string> lines;
};

namespace detail_verify {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

} // namespace detail_verify

// criterion 1: CRT factorization, 200 seeded random KlParams, kf^2 <= 1e4
inline SuiteResult verify_crt(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "crt";
    RamificationSet S(cfg.s_primes);
    std::mt19937_64 rng(cfg.seed);
    struct Case { i64 k, f; Rat xi, m; };
    std::vector<Case> cases;
    while (cases.size() < 200) {
        i64 k = 1 + i64(rng() % 120);
        i64 f = 1 + i64(rng() % 9);
        if (!S.coprime(k) || !S.coprime(f)) continue;
        if (i128(k) * f * f > 10000) continue;
        i64 dnum = 1 + i64(rng() % 3);
        i64 den = 1;
        for (i64 q : S.primes())
            if (rng() % 2) den *= q;
        (void)dnum;
        Rat xi(i64(rng() % 2001) - 1000, den);
        Rat m(i64(rng() % 2001) - 1000, (rng() % 2) ? den : 1);
        cases.push_back({k, f, xi, m});
    }
    int nthreads = std::min(thread_count(), 8);
    std::vector<double> errs(cases.size(), 0.0);
    auto work = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            KlParams p(cases[i].k, cases[i].f, cases[i].xi, cases[i].m, S);
            cplx g = global_kl(p);
            cplx c = crt_factorize(p).product;
            errs[i] = std::abs(g - c) / (1.0 + std::abs(g));
        }
    };
    if (nthreads <= 1) {
        work(0, cases.size());
    } else {
        std::vector<std::future<void>> futs;
        size_t chunk = (cases.size() + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            size_t b = t * chunk, e = std::min(cases.size(), b + chunk);
            if (b < e) futs.push_back(std::async(std::launch::async, work, b, e));
        }
        for (auto& f : futs) f.get();
    }
    double worst = 0;
    for (double e : errs) worst = std::max(worst, e);
    r.margin = worst;
    r.seconds = timer.seconds();
    r.pass = worst <= 1e-9 && r.seconds < 60.0;
    r.lines.push_back("200 random KlParams, kf^2 <= 1e4: max relative error " +
                      detail_verify::fmt(worst));
    return r;
}

// criterion 2: the Weil bound as printed, |S(a,b;c)| <= 2 sqrt(gcd) sqrt(c),
// all c <= 500, 20 samples each.  Diagnostics report the sharp forms.
inline SuiteResult verify_weil(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "weil";
    std::mt19937_64 rng(cfg.seed + 2);
    int violations = 0, opp_violations = 0, tau_violations = 0;
    std::string first_violation;
    double worst_excess = 0;
    for (i64 c = 1; c <= 500; ++c) {
        bool odd_pp = c % 2 == 1 && (c == 1 || factorize(c).size() == 1);
        for (int i = 0; i < 20; ++i) {
            i64 a = i64(rng() % (2 * c + 1)) - c;
            i64 b = i64(rng() % (2 * c + 1)) - c;
            double v = std::abs(classical_kloosterman(a, b, c));
            double bound = weil_bound(a, b, c);
            if (v > bound + 1e-9) {
                ++violations;
                worst_excess = std::max(worst_excess, v / bound);
                if (first_violation.empty()) {
                    std::ostringstream os;
                    os << "counterexample: |S(" << a << "," << b << ";" << c
                       << ")| = " << v << " > " << bound;
                    first_violation = os.str();
                }
                if (odd_pp) ++opp_violations;
            }
            if (v > bound / 2.0 * double(num_divisors(c)) + 1e-9) ++tau_violations;
        }
    }
    r.margin = worst_excess;
    r.seconds = timer.seconds();
    r.pass = violations == 0;
    r.lines.push_back("literal bound 2 sqrt(gcd) sqrt(c): " + std::to_string(violations) +
                      " violations over 10000 samples");
    if (!first_violation.empty()) r.lines.push_back(first_violation);
    r.lines.push_back("odd-prime-power moduli (the case the paper uses): " +
                      std::to_string(opp_violations) + " violations");
    r.lines.push_back("divisor-bound form tau(c) sqrt(gcd) sqrt(c): " +
                      std::to_string(tau_violations) + " violations");
    return r;
}

// criterion 3: local vanishing ("otherwise" case) over the exhaustive grid
inline SuiteResult verify_kl_vanishing(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "kl-vanishing";
    RamificationSet S({2});
    (void)cfg;
    i64 cases = 0, otherwise_cases = 0, exceptions = 0;
    double worst = 0;
    for (i64 ell : {3, 5, 7}) {
        for (int u = 0; u <= 3; ++u) {
            for (int v = 0; v <= 2; ++v) {
                i64 mod = 1;
                for (int i = 0; i < u + 2 * v; ++i) mod *= ell;
                i64 budget = std::max<i64>(6, 2000000 / std::max<i64>(mod, 1));
                std::vector<Rat> xis{Rat(0)}, ms{Rat(0)};
                for (int j = 0; j <= std::min(u + 2 * v, 4); ++j) {
                    i64 lj = 1;
                    for (int i = 0; i < j; ++i) lj *= ell;
                    for (i64 cunit : {1, 2}) {
                        xis.push_back(Rat(cunit * lj));
                        ms.push_back(Rat(cunit * lj));
                    }
                }
                i64 used = 0;
                for (const Rat& xi : xis) {
                    for (const Rat& m : ms) {
                        if (used >= budget) break;
                        ++used;
                        ++cases;
                        auto rep = bound_local(LocalKlParams(ell, u, v, xi, m), S);
                        worst = std::max(worst, rep.ratio);
                        if (rep.case_id == 3) {
                            ++otherwise_cases;
                            if (!rep.vanishes_exactly) ++exceptions;
                        }
                    }
                }
            }
        }
    }
    r.margin = double(exceptions);
    r.seconds = timer.seconds();
    r.pass = (exceptions == 0) && cases >= 1000;
    r.lines.push_back(std::to_string(cases) + " cases, " + std::to_string(otherwise_cases) +
                      " in the vanishing case, " + std::to_string(exceptions) + " exceptions");
    r.lines.push_back("probed implied constant over the non-vanishing cases: " +
                      detail_verify::fmt(worst));
    return r;
}

// criterion 4: Mellin identity + F~ oddness
inline SuiteResult verify_mellin(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "mellin";
    (void)cfg;
    double worst_mellin = 0;
    for (cplx s : {cplx(0.5), cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
        auto direct = mellin_of_F_numeric(s);
        double err = std::abs(direct.value - mellin_F(s));
        worst_mellin = std::max(worst_mellin, err);
    }
    double worst_odd = 0;
    for (int j = 1; j <= 20; ++j) {
        cplx s(0.25 + 0.1 * j, -2.0 + 0.35 * j);
        worst_odd = std::max(worst_odd, std::abs(mellin_F(s) + mellin_F(-s)));
    }
    r.margin = std::max(worst_mellin, worst_odd);
    r.seconds = timer.seconds();
    r.pass = worst_mellin < 1e-6 && worst_odd < 1e-9;
    r.lines.push_back("numeric Mellin vs K_s(2)/(s K_0(2)): max error " +
                      detail_verify::fmt(worst_mellin));
    r.lines.push_back("oddness |F~(s)+F~(-s)| on a 20-point grid: max " +
                      detail_verify::fmt(worst_odd));
    return r;
}

// criterion 5: AFE A-independence and agreement with the series at s = 2
inline SuiteResult verify_afe(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "afe";
    double worst_a = 0, worst_series = 0;
    for (const std::vector<i64>& sp : {std::vector<i64>{2}, std::vector<i64>{2, 3}}) {
        RamificationSet S(sp);
        for (i64 delta : {-3, -4, 5, -7, 13, -8}) {
            auto d = decompose_discriminant(Rat(delta), S);
            double dn = abs_modified_norm_inf_q(d.delta, S).to_double();
            std::vector<double> values;
            for (double A : {1.0, 2.0, 10.0, std::sqrt(std::abs(double(delta))),
                             std::sqrt(dn)}) {
                values.push_back(lfun_afe(cplx(1.0), d, S, A).value.real());
            }
            for (size_t i = 1; i < values.size(); ++i)
                worst_a = std::max(worst_a, std::abs(values[i] - values[0]));
            auto afe2 = lfun_afe(cplx(2.0), d, S, std::sqrt(dn));
            LSeriesParams p{Rat(delta), S, cfg.series_cutoff * 5, 1e-9};
            auto ser = lfun_series(cplx(2.0), p);
            worst_series = std::max(worst_series, std::abs(afe2.value - ser.value));
        }
    }
    r.margin = std::max(worst_a, worst_series);
    r.seconds = timer.seconds();
    r.pass = worst_a < 1e-6 && worst_series < 1e-4;
    r.lines.push_back("A-independence at s=1 over 6 discriminants x 2 ramification sets: max " +
                      detail_verify::fmt(worst_a));
    r.lines.push_back("AFE vs convergent series at s=2: max " + detail_verify::fmt(worst_series));
    return r;
}

// criterion 6: functional-equation involution
inline SuiteResult verify_fe_involution(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "fe-involution";
    std::mt19937_64 rng(cfg.seed + 6);
    RamificationSet S({2});
    double worst = 0;
    for (i64 delta : {-3, -4, 5, -7, 13, -8, 45, 12}) {
        auto d = decompose_discriminant(Rat(delta), S);
        int done = 0;
        while (done < 20) {
            cplx s(-1.5 + 4.0 * double(rng() % 10000) / 10000.0,
                   -2.0 + 4.0 * double(rng() % 10000) / 10000.0);
            try {
                cplx prod = fe_factor(s, d, S) * fe_factor(1.0 - s, d, S);
                worst = std::max(worst, std::abs(prod - 1.0));
                ++done;
            } catch (const Error&) {
                // resample away from poles/zeros
            }
        }
    }
    r.margin = worst;
    r.seconds = timer.seconds();
    r.pass = worst < 1e-10;
    r.lines.push_back("X(s) X(1-s) over 20 admissible s per discriminant: max |. - 1| = " +
                      detail_verify::fmt(worst));
    return r;
}

// criterion 7: Sigma(square) dual-path equality
inline SuiteResult verify_sigma_square(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "sigma-square";
    (void)cfg;
    RamificationSet S({2});
    double worst = 0;
    for (i64 n : {1, 3, 5, 15}) {
        for (int sign : {1, -1}) {
            SquareTermInstance inst(n, {0}, sign, S, WeightSpec::toy(S));
            auto d = sigma_square_direct(inst);
            auto res = sigma_square_residue(inst);
            double rel = std::abs(d.value - res.value) / (1.0 + std::abs(res.value));
            worst = std::max(worst, rel);
            std::ostringstream os;
            os << "n=" << n << " sign=" << (sign > 0 ? "+" : "-")
               << ": direct=" << d.value.real() << " residue=" << res.value.real()
               << " rel=" << detail_verify::fmt(rel);
            r.lines.push_back(os.str());
        }
    }
    r.margin = worst;
    r.seconds = timer.seconds();
    r.pass = worst <= 1e-4 && r.seconds < 300.0;
    return r;
}

// criterion 8: l-adic singular integral, closed form vs brute force
inline SuiteResult verify_local_integral(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "local-integral";
    (void)cfg;
    double worst_slack = 0; // error minus tail bound (should stay <= 0)
    int checked = 0, shape_failures = 0;
    for (i64 ell : {3, 5}) {
        for (int eps : {-1, 0, 1}) {
            for (double sigma : {-1.0, 0.0, 1.0}) {
                for (int w = -2; w <= 4; ++w) {
                    LocalSingularParams p;
                    p.N = Rat(4);
                    p.ell = ell;
                    p.epsilon = eps;
                    p.s = cplx(sigma, 0.0);
                    p.eta = rat_pow_prime(ell, -w);
                    auto closed = j_singular(p);
                    if (closed.terms.size() > 3) ++shape_failures;
                    for (auto& t : closed.terms)
                        if (t.B.sign() <= 0) ++shape_failures;
                    double tail = 0;
                    cplx ref = j_singular_reference(p, 8, &tail);
                    double err = std::abs(closed.value - ref);
                    worst_slack = std::max(worst_slack, err - tail);
                    ++checked;
                }
            }
        }
    }
    r.margin = worst_slack;
    r.seconds = timer.seconds();
    r.pass = worst_slack <= 1e-12 && shape_failures == 0;
    r.lines.push_back(std::to_string(checked) +
                      " parameter combinations: max(|closed - brute| - tail) = " +
                      detail_verify::fmt(worst_slack));
    r.lines.push_back("decompositions with more than 3 terms: " +
                      std::to_string(shape_failures));
    return r;
}

// criterion 9: Moebius / von Mangoldt identities, exact for n <= 1e4
inline SuiteResult verify_moebius(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "moebius";
    i64 nmax = cfg.moebius_nmax;
    i64 failures = 0;
    for (i64 n = 1; n <= nmax; ++n) {
        if (moebius_identity_1(n) != Rat(1)) ++failures;
        auto id2 = moebius_identity_2(n);
        if (!(id2.lhs1 == id2.lambda) || !(id2.lhs2 == -id2.lambda)) ++failures;
    }
    r.margin = double(failures);
    r.seconds = timer.seconds();
    r.pass = failures == 0 && r.seconds < 30.0;
    r.lines.push_back("exact rational identities for n <= " + std::to_string(nmax) + ": " +
                      std::to_string(failures) + " failures (" +
                      detail_verify::fmt(r.seconds) + " s)");
    return r;
}

// criterion 10: height-sum estimators stay within a bounded factor (reported)
inline SuiteResult verify_heights(const RunConfig& cfg) {
    detail_verify::Timer timer;
    SuiteResult r;
    r.name = "heights";
    (void)cfg;
    RamificationSet S({2});
    HeightSumConfig hcfg;
    hcfg.max_t = 100000;
    double worst_large = 0, worst_small = 0;
    bool finite = true;
    for (double a : {1.0, 2.0, 4.0, 8.0}) {
        for (double M : {2.0, 3.0}) {
            auto u = height_sum_large(a, M, 0.0, S, hcfg);
            finite = finite && std::isfinite(u.value);
            worst_large = std::max(worst_large, u.ratio);
            for (double b : {4.0, 16.0, 64.0}) {
                auto v = height_sum_large(a, M, b, S, hcfg);
                finite = finite && std::isfinite(v.value);
                worst_large = std::max(worst_large, v.ratio);
            }
        }
        for (double alpha : {0.25, 0.5}) {
            for (double b : {4.0, 16.0, 64.0}) {
                auto v = height_sum_small(a, b, alpha, S, hcfg);
                finite = finite && std::isfinite(v.value);
                worst_small = std::max(worst_small, v.ratio);
            }
        }
    }
    r.margin = std::max(worst_large, worst_small);
    r.seconds = timer.seconds();
    r.pass = finite && r.margin < 1e3; // bounded factor, reported not asserted
    r.lines.push_back("large-sum max ratio to comparator: " + detail_verify::fmt(worst_large));
    r.lines.push_back("small-sum max ratio to comparator: " + detail_verify::fmt(worst_small));
    return r;
}

inline std::vector<std::string> verify_suite_names() {
    return {"crt",          "weil",        "kl-vanishing", "mellin", "afe",
            "fe-involution", "sigma-square", "local-integral", "moebius", "heights"};
}

inline SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
    if (name == "crt") return verify_crt(cfg);
    if (name == "weil") return verify_weil(cfg);
    if (name == "kl-vanishing") return verify_kl_vanishing(cfg);
    if (name == "mellin") return verify_mellin(cfg);
    if (name == "afe") return verify_afe(cfg);
    if (name == "fe-involution") return verify_fe_involution(cfg);
    if (name == "sigma-square") return verify_sigma_square(cfg);
    if (name == "local-integral") return verify_local_integral(cfg);
    if (name == "moebius") return verify_moebius(cfg);
    if (name == "heights") return verify_heights(cfg);
    throw Error("unknown verify suite '" + name + "'");
}

} // namespace ztk
