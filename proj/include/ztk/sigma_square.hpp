#pragma once

#include <functional>
#include <map>
#include "ztk/kloosterman.hpp"
#include "ztk/zagier.hpp"

namespace ztk {

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

// theta_oo: smooth compactly supported archimedean weight of x = T/(2 sqrt(N));
// theta_{q_i}: locally constant weights of T (and the fixed N), vanishing for
// v_{q_i}(T) < -M_i.
struct WeightSpec {
    std::function<double(double)> theta_inf;
    double inf_support = 2.0; // theta_inf vanishes outside [-support, support]
    std::function<double(const Rat& T, const Rat& N, i64 q)> theta_q;
    std::vector<int> M; // support bounds per q_i

    static WeightSpec toy(const RamificationSet& S, int support_exp = 1) {
        WeightSpec w;
        w.theta_inf = [](double x) {
            if (std::abs(x) >= 2.0) return 0.0;
            double u = x / 2.0;
            return std::exp(-1.0 / (1.0 - u * u));
        };
        w.inf_support = 2.0;
        w.theta_q = [](const Rat& T, const Rat&, i64 q) {
            if (T.is_zero()) return 1.0;
            return valuation(T, q) >= -1 ? 1.0 : 0.0;
        };
        w.M = std::vector<int>(S.size(), support_exp);
        return w;
    }
};

// one instance of the square term: fixed n, nu, sign, weights
struct SquareTermInstance {
    i64 n = 1;                 // positive, coprime to S
    std::vector<int> nu;       // exponent vector over S_fin
    int sign = +1;             // the +- in T^2 -+ 4 n q^nu
    RamificationSet S;
    WeightSpec weights;
    double tolerance = 1e-8;
    i64 max_k = 200000;

    SquareTermInstance(i64 n_, std::vector<int> nu_, int sign_, RamificationSet S_,
                       WeightSpec w_)
        : n(n_), nu(std::move(nu_)), sign(sign_), S(std::move(S_)), weights(std::move(w_)) {
        if (n < 1) throw Error("SquareTermInstance: n must be positive");
        if (!S.coprime(n)) throw Error("SquareTermInstance: n must be coprime to S");
        if (nu.size() != S.size()) throw Error("SquareTermInstance: nu size mismatch");
        if (sign != 1 && sign != -1) throw Error("SquareTermInstance: sign must be +-1");
        if (weights.M.size() != S.size()) throw Error("SquareTermInstance: weight support mismatch");
    }

    Rat q_nu() const {
        Rat out(1);
        for (size_t i = 0; i < nu.size(); ++i) out *= rat_pow_prime(S.primes()[i], nu[i]);
        return out;
    }
    Rat N() const { return Rat(sign) * Rat(n) * q_nu(); } // T^2 - 4N = square
};

// ---------------------------------------------------------------------------
// trace enumeration: T with T^2 - 4N a nonzero square in Z^S
// ---------------------------------------------------------------------------

struct SquareTrace {
    Rat T;
    Rat sigma;       // T^2 - 4N = sigma^2, sigma > 0 representative
    i64 n1 = 1, n2 = 1;
    std::vector<int> alpha, beta;
};

// All T = a n1 q^alpha + b n2 q^beta with n1 n2 = n, alpha+beta = nu,
// ab = sign, support alpha_i, beta_i > -M_i; complete within those bounds.
inline std::vector<SquareTrace> enumerate_square_traces(const SquareTermInstance& inst) {
    std::vector<SquareTrace> out;
    const auto& qs = inst.S.primes();
    size_t r = qs.size();
    Rat fourN = Rat(4) * inst.N();

    std::vector<std::pair<i64, i64>> pairs;
    for (i64 n1 : divisors(inst.n)) pairs.push_back({n1, inst.n / n1});

    // alpha ranges per coordinate: alpha_i > -M_i and beta_i = nu_i - alpha_i > -M_i
    std::vector<std::vector<int>> alpha_choices(r);
    for (size_t i = 0; i < r; ++i) {
        for (int a = -inst.weights.M[i] + 1; a <= inst.nu[i] + inst.weights.M[i] - 1; ++a)
            alpha_choices[i].push_back(a);
        if (alpha_choices[i].empty()) return out;
    }

    std::vector<size_t> idx(r, 0);
    auto advance = [&]() {
        for (size_t i = 0; i < r; ++i) {
            if (++idx[i] < alpha_choices[i].size()) return true;
            idx[i] = 0;
        }
        return false;
    };

    do {
        Rat qa(1), qb(1);
        std::vector<int> alpha(r), beta(r);
        for (size_t i = 0; i < r; ++i) {
            alpha[i] = alpha_choices[i][idx[i]];
            beta[i] = inst.nu[i] - alpha[i];
            qa *= rat_pow_prime(qs[i], alpha[i]);
            qb *= rat_pow_prime(qs[i], beta[i]);
        }
        for (auto [n1, n2] : pairs) {
            // (T+s)(T-s) = 4N: T+s = 2 a n1 q^alpha, T-s = 2 b n2 q^beta, ab = sign
            for (int a : {1, -1}) {
                int b = inst.sign * a;
                Rat T = Rat(a * n1) * qa + Rat(b * n2) * qb;
                Rat sg = Rat(a * n1) * qa - Rat(b * n2) * qb;
                if (sg.is_zero()) continue; // T^2 = 4N contributes nothing
                SquareTrace tr;
                tr.T = T;
                tr.sigma = sg.abs();
                tr.n1 = n1;
                tr.n2 = n2;
                tr.alpha = alpha;
                tr.beta = beta;
                // consistency: T^2 - 4N = sigma^2
                if (T * T - fourN != tr.sigma * tr.sigma)
                    throw Error("enumerate_square_traces: internal parametrization error");
                out.push_back(tr);
            }
        }
    } while (advance());
    return out;
}

// distinct T values with their sigma
inline std::map<Rat, Rat, std::function<bool(const Rat&, const Rat&)>>
distinct_traces(const std::vector<SquareTrace>& traces) {
    auto cmp = [](const Rat& x, const Rat& y) { return x < y; };
    std::map<Rat, Rat, std::function<bool(const Rat&, const Rat&)>> m(cmp);
    for (const auto& t : traces) m.insert({t.T, t.sigma});
    return m;
}

// ---------------------------------------------------------------------------
// the two evaluation routes for Sigma(square)
// ---------------------------------------------------------------------------

namespace detail_ss {

inline double weight_product(const SquareTermInstance& inst, const Rat& T) {
    double nqnu = double(inst.n) * inst.q_nu().to_double();
    double x = T.to_double() / (2.0 * std::sqrt(nqnu));
    double w = inst.weights.theta_inf(x);
    if (w == 0) return 0;
    for (i64 q : inst.S.primes()) {
        w *= inst.weights.theta_q(T, inst.N(), q);
        if (w == 0) return 0;
    }
    return w;
}

} // namespace detail_ss

// direct route: the (k,f) double sum with F- and V-weights at A = sqrt(|delta|')
inline ValueWithError sigma_square_direct(const SquareTermInstance& inst) {
    ValueWithError out;
    auto traces = distinct_traces(enumerate_square_traces(inst));
    if (traces.empty()) return out;

    // V_{0,1} at s = 1: the square-discriminant wiring
    std::vector<int> ones(inst.S.size(), 1);
    VFunc V(0, ones, inst.S.primes(), cplx(1.0), ContourSpec{1.25, 40, 0.05});
    VFunc Vsteep(0, ones, inst.S.primes(), cplx(1.0), ContourSpec{7.0, 40, 0.05});

    for (const auto& [T, sigma] : traces) {
        double w = detail_ss::weight_product(inst, T);
        if (w == 0) continue;
        Rat delta = T * T - Rat(4) * inst.N();
        Rat norm = abs_modified_norm_inf_q(delta, inst.S);
        double A = std::sqrt(norm.to_double());

        cplx tsum = 0;
        for (i64 f : square_divisor_conductors(delta, inst.S)) {
            Rat chi_arg = delta / Rat(f * f);
            double ff = double(f);
            i64 quiet = 0;
            for (i64 k = 1; k <= inst.max_k; ++k) {
                if (!inst.S.coprime(k)) continue;
                double x = double(k) * ff * ff / A;
                auto Fv = F_of(x);
                double vb = std::min(V.decay_bound(x), Vsteep.decay_bound(x));
                int chi = kronecker_rat(chi_arg, k);
                if (chi != 0) {
                    cplx term = double(chi) / (double(k) * ff) *
                                (Fv.value + x * V(x));
                    tsum += term;
                    out.error += (Fv.error + x * V.error_estimate(x)) / (double(k) * ff);
                }
                double scale = (Fv.value.real() + x * vb) / (double(k) * ff);
                if (scale < inst.tolerance * 1e-3) {
                    if (++quiet >= 4) break;
                } else {
                    quiet = 0;
                }
            }
        }
        out.value += w * tsum;
    }
    return out;
}

// residue route: per T, theta-weights times res_{s=0} F~(s) L^S(1+s,delta) |delta|'^{s/2}
inline ValueWithError sigma_square_residue(const SquareTermInstance& inst) {
    ValueWithError out;
    auto traces = distinct_traces(enumerate_square_traces(inst));
    for (const auto& [T, sigma] : traces) {
        double w = detail_ss::weight_product(inst, T);
        if (w == 0) continue;
        Rat delta = T * T - Rat(4) * inst.N();
        Rat norm = abs_modified_norm_inf_q(delta, inst.S);
        double A = std::sqrt(norm.to_double());
        out.value += w * residue_term(delta, inst.S, A);
        out.error += 1e-13 * std::abs(out.value);
    }
    return out;
}

} // namespace ztk
