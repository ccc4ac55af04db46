#pragma once

#include <functional>
#include "ztk/padic.hpp"

namespace ztk {

// ---------------------------------------------------------------------------
// brute-force l-adic integration (Haar measure, vol(Z_l) = 1)
// ---------------------------------------------------------------------------

// Riemann sum over residue classes mod l^depth in Z_l.  The integrand gets
// the integer class representative and must be constant on those classes.
inline cplx padic_integrate(i64 ell, int depth,
                            const std::function<cplx(const Rat&)>& f) {
    if (depth < 1 || depth > 40) throw Error("padic_integrate: bad depth");
    double count = std::pow(double(ell), depth);
    if (count > 4e7) throw Error("padic_integrate: depth too large to enumerate");
    i64 n = i64(std::llround(count));
    cplx acc = 0;
    for (i64 a = 0; a < n; ++a) acc += f(Rat(a));
    return acc / double(n);
}

// Same over the ball  center + l^L Z_l  (L may be negative: a box l^L Z_l).
inline cplx padic_integrate_ball(i64 ell, const PadicApprox& center, int L, int depth,
                                 const std::function<cplx(const PadicApprox&)>& f) {
    if (depth < 1 || depth > 40) throw Error("padic_integrate_ball: bad depth");
    double count = std::pow(double(ell), depth);
    if (count > 4e7) throw Error("padic_integrate_ball: depth too large to enumerate");
    i64 n = i64(std::llround(count));
    Rat scale = rat_pow_prime(ell, L);
    double measure = std::pow(double(ell), -double(L + depth));
    cplx acc = 0;
    for (i64 t = 0; t < n; ++t) {
        PadicApprox y = center + PadicApprox::from_rat(Rat(t) * scale, ell, center.precision());
        acc += f(y);
    }
    return acc * measure;
}

// Integral over the shell l^u Z_l^x, enumerating unit classes mod l^J.
inline cplx integrate_unit_shell(i64 ell, int u, int J,
                                 const std::function<cplx(const PadicApprox&, const Rat&)>& f,
                                 int prec = PadicApprox::kDefaultDigits) {
    if (J < 1 || J > 30) throw Error("integrate_unit_shell: bad class depth");
    double count = std::pow(double(ell), J);
    if (count > 4e7) throw Error("integrate_unit_shell: class depth too large");
    i64 lj = i64(std::llround(count));
    double measure = std::pow(double(ell), -double(u + J));
    cplx acc = 0;
    for (i64 y0 = 1; y0 < lj; ++y0) {
        if (y0 % ell == 0) continue;
        Rat rep = Rat(y0) * rat_pow_prime(ell, u);
        acc += f(PadicApprox::from_rat(rep, ell, prec), rep);
    }
    return acc * measure;
}

// ---------------------------------------------------------------------------
// the singular Fourier integral J(s, eta) around y = 2 sqrt(N)
// ---------------------------------------------------------------------------

// Parameters of J(s,eta) = int_{omega_l(y)=eps, |y-2sqrt(N)| <= l^-L}
//                              |y^2-4N|'^{s/2} e_l(-y eta) dy.
// Requires Re s > -2 and N a square in Q_l; L, when given, must satisfy
// L >= nu + 4 (2 nu = v_l(N)) and the per-case parity condition.
struct LocalSingularParams {
    cplx s;
    Rat eta;
    Rat N;
    i64 ell = 3;
    int epsilon = 0;            // in {-1, 0, +1}
    std::optional<int> L;       // cutoff; auto-selected when absent
};

struct JTerm {
    cplx A;            // coefficient
    Rat B;             // power base: contributes B^{s/2}
    bool geometric;    // true: multiplied by (1 - l^{-2-s})^{-1}
};

struct JResult {
    cplx value = 0;
    std::vector<JTerm> terms;
    int L = 0;
    int nu = 0;
    std::string case_id;
    cplx prefactor = 1;       // e_l(-2 sqrt(N) eta), already folded into terms
    double bound_constant = 0; // measured |J| (1+|eta|)^{1+sigma/2}
    PadicApprox root;          // the square root of N that was used

    JResult() : root(PadicApprox::zero(3)) {}
};

namespace detail {

inline int required_L_parity(int epsilon, int nu) {
    // eps = 0 wants L != nu (mod 2); eps = +-1 wants L == nu (mod 2)
    int nu_par = ((nu % 2) + 2) % 2;
    return epsilon == 0 ? 1 - nu_par : nu_par;
}

inline int auto_cutoff(int epsilon, int nu) {
    int L = nu + 4;
    if (((L % 2) + 2) % 2 != required_L_parity(epsilon, nu)) ++L;
    return L;
}

} // namespace detail

// Closed-form shell decomposition of J(s,eta); odd l only (2 in S).
inline JResult j_singular(const LocalSingularParams& p) {
    const i64 ell = p.ell;
    if (ell == 2) throw Error("j_singular: l = 2 excluded (2 in S)");
    if (!is_prime(ell)) throw Error("j_singular: l must be prime");
    if (p.epsilon < -1 || p.epsilon > 1) throw Error("j_singular: epsilon must be in {-1,0,1}");
    if (p.s.real() <= -2) throw Error("j_singular: Re s must exceed -2");

    auto root = sqrt_padic(p.N, ell);
    if (!root) throw Error("j_singular: N has no square root in Q_l");
    if (valuation(p.N, ell) % 2 != 0) throw Error("j_singular: v_l(N) must be even");
    int nu = valuation(p.N, ell) / 2;

    int want_par = detail::required_L_parity(p.epsilon, nu);
    int L = p.L ? *p.L : detail::auto_cutoff(p.epsilon, nu);
    if (L < nu + 4)
        throw Error("j_singular: L must be >= nu + 4 (case " +
                    std::string(p.epsilon == 0 ? "eps0" : "eps1") + ")");
    if (((L % 2) + 2) % 2 != want_par)
        throw Error(std::string("j_singular: parity of L unsupported for case ") +
                    (p.epsilon == 0 ? "l_odd/eps0 (needs L != nu mod 2)"
                                    : "l_odd/eps_pm1 (needs L == nu mod 2)"));

    // w = -v_l(eta); all shells u >= max(L, w) carry the full character value,
    // the shell u = w-1 a boundary value, deeper shells vanish.
    bool eta_zero = p.eta.is_zero();
    int w = eta_zero ? INT32_MIN : -valuation(p.eta, ell);

    // prefactor from the shift y -> y + 2 sqrt(N)
    PadicApprox two_root = *root * Rat(2);
    cplx pre = eta_zero ? cplx(1, 0) : e_ell(two_root * (-p.eta));

    JResult out;
    out.root = *root;
    out.L = L;
    out.nu = nu;
    out.prefactor = pre;

    const double dl = double(ell);
    const int rho = (p.epsilon == 0) ? 1 : 0;
    const double c_full = (p.epsilon == 0) ? (1.0 - 1.0 / dl) : 0.5 * (1.0 - 1.0 / dl);

    // geometric part
    int u0 = std::max(L, eta_zero ? L : w);
    if (((u0 % 2) + 2) % 2 != want_par) ++u0;
    {
        JTerm t;
        t.geometric = true;
        t.A = pre * c_full * std::pow(dl, -double(u0));
        t.B = rat_pow_prime(ell, -u0 - nu + rho);
        out.terms.push_back(t);
    }

    // boundary shell u = w - 1, when it lies in the domain with the right parity
    if (!eta_zero && w - 1 >= L && (((w - 1) % 2) + 2) % 2 == want_par) {
        JTerm t;
        t.geometric = false;
        if (p.epsilon == 0) {
            t.A = pre * (-std::pow(dl, -double(w)));
            t.B = rat_pow_prime(ell, -w - nu + 2);
        } else {
            i64 eta0 = reduce_mod(p.eta / rat_pow_prime(ell, valuation(p.eta, ell)), ell);
            i64 n0 = out.root.unit_mod(1);
            int gsign = p.epsilon * kronecker(checked_i64(i128(n0) * eta0, "j_singular"), ell);
            t.A = pre * std::pow(dl, -double(w)) * gauss_sum(ell, gsign);
            t.B = rat_pow_prime(ell, -w - nu + 1);
        }
        out.terms.push_back(t);
    }

    out.case_id = std::string("l_odd/") + (p.epsilon == 0 ? "eps0" : "eps_pm1") + "/" +
                  (eta_zero ? "eta0" : (w < L ? "w_lt_L" : "w_ge_L"));

    cplx geom_factor = 1.0 / (1.0 - std::pow(cplx(dl), -2.0 - p.s));
    for (const JTerm& t : out.terms) {
        cplx bpow = std::exp((p.s / 2.0) * std::log(t.B.to_double()));
        out.value += t.A * bpow * (t.geometric ? geom_factor : cplx(1));
    }

    double abs_eta = eta_zero ? 0.0 : std::pow(dl, double(w));
    out.bound_constant = std::abs(out.value) *
                         std::pow(1.0 + abs_eta, 1.0 + p.s.real() / 2.0);
    return out;
}

// Independent evaluation of J(s,eta) by exact shell-by-shell Riemann sums
// (the integrand is evaluated through p-adic arithmetic, no closed forms).
// Sums shells u = L .. L+window-1; *tail_bound receives the geometric bound
// on everything beyond.
inline cplx j_singular_reference(const LocalSingularParams& p, int window,
                                 double* tail_bound = nullptr) {
    const i64 ell = p.ell;
    if (ell == 2) throw Error("j_singular_reference: l = 2 excluded");
    auto root = sqrt_padic(p.N, ell);
    if (!root) throw Error("j_singular_reference: N has no square root in Q_l");
    int nu = valuation(p.N, ell) / 2;
    int L = p.L ? *p.L : detail::auto_cutoff(p.epsilon, nu);

    bool eta_zero = p.eta.is_zero();
    int w = eta_zero ? INT32_MIN : -valuation(p.eta, ell);

    PadicApprox two_root = *root * Rat(2);
    PadicApprox four_root = *root * Rat(4);
    cplx pre = eta_zero ? cplx(1, 0) : e_ell(two_root * (-p.eta));

    cplx acc = 0;
    for (int u = L; u < L + window; ++u) {
        int J = std::max(1, eta_zero ? 1 : w - u);
        acc += integrate_unit_shell(
            ell, u, J,
            [&](const PadicApprox& z, const Rat& z_rep) -> cplx {
                PadicApprox t = z * (z + four_root); // (y-2rt)(y+2rt) at y = z+2rt
                if (omega_from_t(t) != p.epsilon) return 0;
                double norm = modified_norm(t).to_double();
                cplx weight = std::exp((p.s / 2.0) * std::log(norm));
                cplx phase = eta_zero ? cplx(1, 0) : e_ell(-(z_rep * p.eta), ell);
                return weight * phase;
            });
    }

    if (tail_bound) {
        double sigma = p.s.real();
        double ratio = std::pow(double(ell), -1.0 - sigma / 2.0);
        double tail = 0;
        for (int rho : {0, 1}) {
            double first = std::pow(double(ell), -(L + window) * (1.0 + sigma / 2.0)) *
                           std::pow(double(ell), (-nu + rho) * sigma / 2.0);
            tail += std::abs(first) / (1.0 - std::pow(ratio, 2));
        }
        *tail_bound = tail;
    }
    return pre * acc;
}

} // namespace ztk
