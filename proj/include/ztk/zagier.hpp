#pragma once

#include "ztk/padic.hpp"
#include "ztk/special.hpp"

namespace ztk {

// ---------------------------------------------------------------------------
// Riemann zeta via Euler-Maclaurin; Laurent data at s = 1
// ---------------------------------------------------------------------------

inline cplx zeta_em(cplx s) {
    if (std::abs(s - cplx(1.0)) < 1e-12)
        throw Error("zeta_em: pole at s = 1 (use zeta_laurent1)");
    // B_2, B_4, ..., B_20
    static const double bern[10] = {1.0 / 6,  -1.0 / 30,   1.0 / 42,   -1.0 / 30,
                                    5.0 / 66, -691.0 / 2730, 7.0 / 6,  -3617.0 / 510,
                                    43867.0 / 798, -174611.0 / 330};
    const int N = 24;
    cplx acc = 0;
    for (int n = 1; n < N; ++n) acc += std::exp(-s * std::log(double(n)));
    cplx lnN = std::log(double(N));
    acc += std::exp((1.0 - s) * lnN) / (s - 1.0);
    acc += 0.5 * std::exp(-s * lnN);
    cplx rising = s; // s(s+1)...(s+2k-2)
    double fact = 2;  // (2k)!
    for (int k = 1; k <= 10; ++k) {
        acc += bern[k - 1] / fact * rising * std::exp((-s - double(2 * k - 1)) * lnN);
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        fact *= (2 * k + 1) * (2 * k + 2);
    }
    return acc;
}

constexpr double kEulerGamma = 0.5772156649015328606065120900824024;

inline LaurentData zeta_laurent1() {
    LaurentData l;
    l.residue = 1.0;
    l.finite_part = kEulerGamma;
    l.center = 1.0;
    return l;
}

// ---------------------------------------------------------------------------
// partial Zagier L-function L^S(s, delta)
// ---------------------------------------------------------------------------

// f in Z_(S)^{>0} with f^2 | delta inside Z^S, i.e. f^2 divides the
// prime-to-S content of delta.
inline std::vector<i64> square_divisor_conductors(const Rat& delta, const RamificationSet& S) {
    i64 m = prime_to_s_part(delta, S);
    std::vector<i64> out;
    for (i64 f : divisors(m))
        if (m % (f * f) == 0) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
}

struct LSeriesParams {
    Rat delta;
    RamificationSet S;
    i64 cutoff = 200000;   // k-range for the direct series
    double tolerance = 1e-9;
};

// Direct double Dirichlet sum, Re s > 1 only.  Tail estimate is reported.
inline ValueWithError lfun_series(cplx s, const LSeriesParams& p) {
    if (s.real() <= 1.0)
        throw Error("lfun_series: requires Re s > 1 (use lfun_afe elsewhere)");
    if (p.delta.is_zero()) throw Error("lfun_series: delta = 0");
    cplx acc = 0;
    double tail = 0;
    for (i64 f : square_divisor_conductors(p.delta, p.S)) {
        Rat chi_arg = p.delta / Rat(f * f);
        cplx fsum = 0;
        for (i64 k = 1; k <= p.cutoff; ++k) {
            if (!p.S.coprime(k)) continue;
            int chi = kronecker_rat(chi_arg, k);
            if (chi == 0) continue;
            fsum += double(chi) * std::exp(-s * std::log(double(k)));
        }
        acc += std::exp((1.0 - 2.0 * s) * std::log(double(f))) * fsum;
        // |sum_{k>K} chi(k) k^-s| <= K^{1-sigma}/(sigma-1)
        tail += std::pow(double(f), 1.0 - 2.0 * s.real()) *
                std::pow(double(p.cutoff), 1.0 - s.real()) / (s.real() - 1.0);
    }
    return {acc, tail};
}

// The factor X(s) with L^S(s,delta) = X(s) L^S(1-s,delta):
// (|delta|'_{oo,q}/pi)^{1/2-s} prod (1-eps_i q_i^{-s})/(1-eps_i q_i^{s-1})
//   Gamma((iota+1-s)/2)/Gamma((iota+s)/2).
inline cplx fe_factor(cplx s, const Discriminant& d, const RamificationSet& S) {
    double norm = abs_modified_norm_inf_q(d.delta, S).to_double();
    // pole/zero guards
    cplx gnum = (double(d.iota) + 1.0 - s) / 2.0;
    cplx gden = (double(d.iota) + s) / 2.0;
    for (cplx z : {gnum, gden}) {
        if (std::abs(z.imag()) < 1e-8 && z.real() < 0.5 &&
            std::abs(z.real() - std::round(z.real())) < 1e-8)
            throw Error("fe_factor: Gamma pole/zero at s = " + std::to_string(s.real()));
    }
    cplx out = std::exp((0.5 - s) * std::log(norm / M_PI));
    for (size_t i = 0; i < S.primes().size(); ++i) {
        if (d.epsilon[i] == 0) continue;
        double e = double(d.epsilon[i]);
        double q = double(S.primes()[i]);
        cplx den = 1.0 - e * std::exp((s - 1.0) * std::log(q));
        if (std::abs(den) < 1e-8)
            throw Error("fe_factor: local factor zero at s = " + std::to_string(s.real()));
        out *= (1.0 - e * std::exp(-s * std::log(q))) / den;
    }
    out *= gamma_ratio(gnum, gden);
    return out;
}

// ---------------------------------------------------------------------------
// approximate functional equation (non-square delta)
// ---------------------------------------------------------------------------

struct AfeConfig {
    double tolerance = 1e-10;
    i64 max_k = 2000000;
    ContourSpec contour; // sigma auto-chosen when <= 0
};

// L^S(s,delta) = sum_f sum_k f^{1-2s} k^{-s} chi(k) F(k f^2/A)
//   + |d|'^{1/2-s} sum_f sum_k f^{2s-1} k^{s-1} chi(k) V_{iota,eps,s}(k f^2 A/|d|')
inline cplx lfun_square(cplx s, const Rat& delta, const RamificationSet& S);

inline ValueWithError lfun_afe(cplx s, const Discriminant& d, const RamificationSet& S,
                               double A, const AfeConfig& cfg = {}) {
    if (A <= 0) throw Error("lfun_afe: splitting parameter A must be positive");
    if (d.square) { // square discriminants have their own closed form
        cplx v = lfun_square(s, d.delta, S);
        return {v, 1e-12 * (1.0 + std::abs(v))};
    }

    ContourSpec spec = cfg.contour;
    if (spec.sigma <= 0)
        spec.sigma = std::max({0.0, s.real() - 1.0, 1.0 - s.real()}) + 0.75;
    VFunc V(d.iota, d.epsilon, S.primes(), s, spec);
    // steep contour used only for certified truncation bounds
    ContourSpec steep = spec;
    steep.sigma = std::max({0.0, s.real() - 1.0, 1.0 - s.real()}) + 7.0;
    VFunc Vbound(d.iota, d.epsilon, S.primes(), s, steep);

    double dn = abs_modified_norm_inf_q(d.delta, S).to_double();
    cplx first = 0, second = 0;
    double err = 0;

    for (i64 f : square_divisor_conductors(d.delta, S)) {
        Rat chi_arg = d.delta / Rat(f * f);
        double ff = double(f);
        cplx f_pow_first = std::exp((1.0 - 2.0 * s) * std::log(ff));
        cplx f_pow_second = std::exp((2.0 * s - 1.0) * std::log(ff));
        i64 quiet = 0;
        for (i64 k = 1; k <= cfg.max_k; ++k) {
            if (!S.coprime(k)) continue;
            double x1 = double(k) * ff * ff / A;
            double x2 = double(k) * ff * ff * A / dn;
            auto Fv = F_of(x1);
            double vbound = std::min(V.decay_bound(x2), Vbound.decay_bound(x2));
            int chi = kronecker_rat(chi_arg, k);
            if (chi != 0) {
                cplx t1 = f_pow_first * double(chi) *
                          std::exp(-s * std::log(double(k))) * Fv.value;
                cplx t2 = std::exp((0.5 - s) * std::log(dn)) * f_pow_second *
                          double(chi) * std::exp((s - 1.0) * std::log(double(k))) * V(x2);
                first += t1;
                second += t2;
                err += Fv.error + V.error_estimate(x2) * std::abs(f_pow_second) *
                                      std::pow(dn, 0.5 - s.real());
            }
            // certified-decay cutoff: both weights below tolerance scale
            double weight_scale =
                std::abs(f_pow_first) * std::pow(double(k), -s.real()) * Fv.value.real() +
                std::pow(dn, 0.5 - s.real()) * std::abs(f_pow_second) *
                    std::pow(double(k), s.real() - 1.0) * vbound;
            if (weight_scale < cfg.tolerance * 1e-3) {
                if (++quiet >= 4) break;
            } else {
                quiet = 0;
            }
        }
    }
    return {first + second, err};
}

// ---------------------------------------------------------------------------
// square-discriminant closed form and Laurent data at s = 1
// ---------------------------------------------------------------------------

// delta = sigma^2 with sigma in Z^S: L^S(s,delta) =
//   prod_i (1-q_i^{-s}) [sum_{f|sg} f^{1-2s} sum_{k|sg/f} mu(k) k^{-s}] zeta(s),
// where sg = |sigma^(q)|.
struct SquareLfun {
    i64 sigma_q = 1;       // |sigma^(q)|
    Rat residue_exact;     // residue at s = 1, exact: prod (1 - 1/q_i)
    LaurentData at1;       // residue + finite part at s = 1
};

inline Rat sqrt_exact(const Rat& x) {
    if (x.sign() < 0) throw Error("sqrt_exact: negative");
    auto isqrt = [](i64 v) -> i64 {
        i64 r = i64(std::llround(std::sqrt(double(v))));
        while (r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r;
    };
    i64 rn = isqrt(x.num()), rd = isqrt(x.den());
    if (rn * rn != x.num() || rd * rd != x.den())
        throw Error("sqrt_exact: not a rational square");
    return Rat(rn, rd);
}

inline bool is_rational_square(const Rat& x) {
    if (x.sign() <= 0) return false;
    try {
        (void)sqrt_exact(x);
        return true;
    } catch (const Error&) {
        return false;
    }
}

inline cplx lfun_square(cplx s, const Rat& delta, const RamificationSet& S) {
    if (!is_rational_square(delta)) throw Error("lfun_square: delta must be a nonzero square");
    Rat sigma = sqrt_exact(delta);
    i64 sg = prime_to_s_part(sigma, S);
    cplx euler = 1;
    for (i64 q : S.primes()) euler *= 1.0 - std::exp(-s * std::log(double(q)));
    cplx r = 0;
    for (i64 f : divisors(sg)) {
        cplx inner = 0;
        for (i64 k : divisors(sg / f))
            inner += double(mu(k)) * std::exp(-s * std::log(double(k)));
        r += std::exp((1.0 - 2.0 * s) * std::log(double(f))) * inner;
    }
    return euler * r * zeta_em(s);
}

inline SquareLfun lfun_square_laurent1(const Rat& delta, const RamificationSet& S) {
    if (!is_rational_square(delta)) throw Error("lfun_square_laurent1: delta must be a nonzero square");
    Rat sigma = sqrt_exact(delta);
    SquareLfun out;
    out.sigma_q = prime_to_s_part(sigma, S);

    // exact residue: prod (1-1/q_i) * [sum_f (1/f) sum_k mu(k)/k] with the
    // bracket identically 1 (Moebius identity); keep both routes and compare
    Rat bracket(0);
    for (i64 f : divisors(out.sigma_q)) {
        Rat inner(0);
        for (i64 k : divisors(out.sigma_q / f)) inner += Rat(mu(k), k);
        bracket += Rat(1, f) * inner;
    }
    if (bracket != Rat(1))
        throw Error("lfun_square_laurent1: Moebius identity failed (internal)");
    Rat res(1);
    for (i64 q : S.primes()) res *= Rat(q - 1, q);
    out.residue_exact = res;

    // E(s) = prod_i (1-q_i^{-s}) r(s); L = E(s) zeta(s);
    // fp_{s=1} L = E(1) gamma + E'(1), by term-by-term differentiation
    double E1 = res.to_double();
    double dlog_prod = 0;
    for (i64 q : S.primes()) dlog_prod += std::log(double(q)) / (double(q) - 1.0);
    double r1 = 1.0; // r(1) = bracket = 1
    double dr1 = 0;
    for (i64 f : divisors(out.sigma_q)) {
        double inner = 0, dinner = 0;
        for (i64 k : divisors(out.sigma_q / f)) {
            inner += double(mu(k)) / double(k);
            dinner += -double(mu(k)) * std::log(double(k)) / double(k);
        }
        double fpow = 1.0 / double(f);
        dr1 += fpow * (-2.0 * std::log(double(f))) * inner + fpow * dinner;
    }
    double dE1 = E1 * dlog_prod * r1 + E1 * dr1;

    out.at1.center = 1.0;
    out.at1.residue = E1;
    out.at1.finite_part = E1 * kEulerGamma + dE1;
    return out;
}

// res_{s=0} F~(s) L^S(1+s, delta) A^s  for square delta:
// with F~ = 1/s + O(s) and L^S(1+s) = R/s + P + O(s), equals P + R log A.
inline cplx residue_term(const Rat& delta, const RamificationSet& S, double A) {
    if (A <= 0) throw Error("residue_term: A must be positive");
    auto l = lfun_square_laurent1(delta, S);
    return l.at1.finite_part + l.at1.residue * std::log(A);
}

} // namespace ztk
