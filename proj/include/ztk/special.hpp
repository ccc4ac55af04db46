#pragma once

#include <vector>
#include "ztk/laurent.hpp"
#include "ztk/rational.hpp"

#include <complex>
#include <cmath>

namespace ztk {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// complex log-gamma (Lanczos g=7) with reflection
// ---------------------------------------------------------------------------

namespace detail_sf {

inline cplx log_sin_pi(cplx z) {
    if (std::abs(z.imag()) <= 8.0) {
        cplx s = std::sin(M_PI * z);
        if (std::abs(s) < 1e-300) throw Error("log_sin_pi: at a zero of sin");
        return std::log(s);
    }
    if (z.imag() > 0) {
        // sin(pi z) = -e^{-i pi z}(1 - e^{2 i pi z})/(2i)
        cplx corr = std::log(1.0 - std::exp(cplx(0, 2 * M_PI) * z));
        return cplx(0, -M_PI) * z + cplx(-std::log(2.0), M_PI / 2) + corr;
    }
    cplx c = log_sin_pi(std::conj(z));
    return std::conj(c);
}

} // namespace detail_sf

inline cplx lgamma_complex(cplx z) {
    static const double c[9] = {
        0.99999999999980993,   676.5203681218851,    -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection; any 2*pi*i branch offsets cancel in exp of differences
        return std::log(M_PI) - detail_sf::log_sin_pi(z) - lgamma_complex(1.0 - z);
    }
    cplx zz = z - 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (zz + double(i));
    cplx t = zz + 7.5;
    return 0.5 * std::log(2 * M_PI) + (zz + 0.5) * std::log(t) - t + std::log(x);
}

// Gamma(a)/Gamma(b); exact w.r.t. lgamma branch ambiguity.
inline cplx gamma_ratio(cplx a, cplx b) {
    auto at_pole = [](cplx z) {
        return std::abs(z.imag()) < 1e-9 && z.real() < 0.5 &&
               std::abs(z.real() - std::round(z.real())) < 1e-9;
    };
    if (at_pole(a)) throw Error("gamma_ratio: numerator at a pole of Gamma");
    if (at_pole(b)) return 0; // 1/Gamma vanishes there
    return std::exp(lgamma_complex(a) - lgamma_complex(b));
}

// ---------------------------------------------------------------------------
// K_s(2), the modified Bessel function of the second kind at argument 2
// ---------------------------------------------------------------------------

struct ValueWithError {
    cplx value{0.0, 0.0};
    double error = 0.0;
};

namespace detail_sf {

// integral representation: K_s(2) = int_0^inf e^{-2 cosh t} cosh(s t) dt
inline cplx bessel_k2_integral(cplx s, double h) {
    const double T = 6.5;
    cplx acc = 0.5 * std::exp(-2.0); // t = 0 endpoint, cosh(0)=1
    for (double t = h; t <= T; t += h)
        acc += std::exp(-2.0 * std::cosh(t)) * std::cosh(s * t);
    return acc * h;
}

// power series via I: K_s(2) = (pi/2)(I_{-s}(2) - I_s(2)) / sin(pi s),
// I_s(2) = sum_m 1/(m! Gamma(m+s+1)); no cancellation for |Im s| large.
inline cplx bessel_i2(cplx s) {
    cplx acc = 0;
    for (int m = 0; m <= 40; ++m) {
        cplx term = std::exp(-lgamma_complex(cplx(m + 1)) - lgamma_complex(double(m) + s + 1.0));
        acc += term;
        if (m > 4 && std::abs(term) < 1e-24 * std::abs(acc)) break;
    }
    return acc;
}

} // namespace detail_sf

inline ValueWithError bessel_k2(cplx s) {
    ValueWithError out;
    if (std::abs(s.imag()) <= 4.0 && std::abs(s.real()) <= 12.0) {
        cplx a = detail_sf::bessel_k2_integral(s, 0.01);
        cplx b = detail_sf::bessel_k2_integral(s, 0.005);
        out.value = b;
        out.error = std::abs(a - b) + 1e-16 * std::abs(b);
        return out;
    }
    // near-integer real s would sit on a sin(pi s) zero; only reached with
    // |Im s| > 4 where |sin(pi s)| >= sinh(4 pi)
    cplx num = detail_sf::bessel_i2(-s) - detail_sf::bessel_i2(s);
    cplx den = std::sin(M_PI * s);
    out.value = 0.5 * M_PI * num / den;
    out.error = 1e-13 * std::abs(out.value) + 1e-280;
    return out;
}

inline double bessel_k0_2() {
    static const double k0 = bessel_k2(cplx(0)).value.real();
    return k0;
}

// ---------------------------------------------------------------------------
// F(x) = (1/2K_0(2)) int_x^inf e^{-t-1/t} dt/t  and its Mellin transform
// ---------------------------------------------------------------------------

// After t = x e^v the tail integral is int_0^inf exp(-x e^v - e^{-v}/x) dv;
// the exp-sinh substitution v = exp((pi/2) sinh u) then gives a
// double-exponential rule with no endpoint error.
inline ValueWithError F_of(double x) {
    if (x <= 0) throw Error("F_of: x must be positive");
    if (x < 0.02) {
        // 1 - F(x) <= x e^{-1/x} / (2 K_0(2)), below double resolution here
        return {1.0, x * std::exp(-1.0 / x) / (2.0 * bessel_k0_2()) + 1e-16};
    }
    if (x > 700.0) {
        return {0.0, std::exp(-700.0)};
    }
    auto eval = [&](double h) {
        double acc = 0;
        for (double u = -3.8; u <= 3.8; u += h) {
            double v = std::exp(0.5 * M_PI * std::sinh(u));
            double jac = v * 0.5 * M_PI * std::cosh(u);
            double ev = (v > 700.0) ? INFINITY : std::exp(v);
            double t = x * ev + std::exp(-v) / x;
            if (t > 745.0 || !std::isfinite(t)) continue;
            acc += std::exp(-t) * jac;
        }
        return acc * h;
    };
    double a = eval(0.025), b = eval(0.0125);
    ValueWithError out;
    out.value = b / (2.0 * bessel_k0_2());
    out.error = std::abs(a - b) / (2.0 * bessel_k0_2()) + 1e-16;
    return out;
}

// Mellin transform of F: (1/s) K_s(2)/K_0(2); odd, simple pole at 0.
inline cplx mellin_F(cplx s) {
    if (std::abs(s) < 1e-12) throw Error("mellin_F: pole at s = 0 (use mellin_F_laurent0)");
    return bessel_k2(s).value / (s * bessel_k0_2());
}

// Laurent data at s = 0: residue 1 (K_0/K_0), finite part 0 (K_s even in s).
inline LaurentData mellin_F_laurent0() {
    LaurentData l;
    l.residue = 1.0;
    l.finite_part = 0.0;
    l.center = 0.0;
    return l;
}

// direct quadrature of int_0^inf x^{s-1} F(x) dx  (independent check path)
inline ValueWithError mellin_of_F_numeric(cplx s) {
    if (s.real() <= 0.05) throw Error("mellin_of_F_numeric: Re s too small");
    // lower cutoff where x^sigma F(x) drops below 1e-14 (F -> 1 as x -> 0)
    double ylo = -(14.0 * std::log(10.0) / std::max(s.real(), 0.05) + 2.0);
    auto eval = [&](double h) {
        cplx acc = 0;
        for (double y = ylo; y <= 4.5; y += h) {
            double x = std::exp(y);
            acc += std::exp(s * y) * F_of(x).value;
        }
        return acc * h;
    };
    cplx a = eval(0.04), b = eval(0.02);
    return {b, std::abs(a - b) + 1e-14};
}

// ---------------------------------------------------------------------------
// V_{iota,eps,s} via vertical-contour integration
// ---------------------------------------------------------------------------

// vertical contour (sigma) truncated at +-height with uniform step
struct ContourSpec {
    double sigma = 1.25;
    double height = 40.0;
    double step = 0.05;
};

// V_{iota,eps,s}(x) = pi^{s-1/2}/(2 pi i) int_(sigma) F~(u)
//     prod_i (1 - eps_i q_i^{u-s})/(1 - eps_i q_i^{s-u-1})
//     Gamma((iota+1-s+u)/2)/Gamma((iota+s-u)/2) (pi x)^{-u} du.
// Admissible contours stay right of the F~ pole at u=0, of the local-factor
// zero lines Re u = Re s - 1 and of the Gamma poles; nodes and weights are
// precomputed so evaluations are dot products.
class VFunc {
public:
    VFunc(int iota, std::vector<int> eps, std::vector<i64> qs, cplx s,
          ContourSpec contour = {})
        : iota_(iota), eps_(std::move(eps)), qs_(std::move(qs)), s_(s), spec_(contour) {
        if (eps_.size() != qs_.size()) throw Error("VFunc: eps/qs size mismatch");
        if (iota_ != 0 && iota_ != 1) throw Error("VFunc: iota must be 0 or 1");
        double sig = spec_.sigma;
        if (sig + s_.real() <= 1.0 + 1e-9)
            throw Error("VFunc: contour violates sigma + Re s > 1");
        if (sig <= 1e-9 || sig <= s_.real() - 1.0 + 1e-9)
            throw Error("VFunc: contour not right of the first pole");
        if (spec_.step <= 0 || spec_.height <= 0) throw Error("VFunc: bad contour spec");

        size_t n = size_t(2 * std::floor(spec_.height / spec_.step)) + 1;
        nodes_.reserve(n);
        weights_.reserve(n);
        double t0 = -spec_.step * std::floor(spec_.height / spec_.step);
        for (size_t j = 0; j < n; ++j) {
            cplx u(sig, t0 + double(j) * spec_.step);
            nodes_.push_back(u);
            weights_.push_back(weight_at(u) * (spec_.step / (2 * M_PI)));
        }
        double tail = std::abs(weight_at(cplx(sig, spec_.height))) +
                      std::abs(weight_at(cplx(sig, -spec_.height)));
        tail_err_ = tail * 2.0; // decay e^{-pi|t|/2}: tail < first neglected * 2/(pi/2)
        sum_abs_w_ = 0;
        for (auto& w : weights_) sum_abs_w_ += std::abs(w);
    }

    cplx operator()(double x) const {
        if (x <= 0) throw Error("VFunc: argument must be positive");
        cplx lx = std::log(M_PI * x);
        cplx acc = 0;
        for (size_t j = 0; j < nodes_.size(); ++j)
            acc += weights_[j] * std::exp(-nodes_[j] * lx);
        return acc;
    }

    double error_estimate(double x) const {
        double xs = std::pow(x * M_PI, -spec_.sigma);
        return (tail_err_ + 1e-15 * sum_abs_w_) * xs;
    }

    // magnitude bound |V(x)| <= sum|w| (pi x)^{-sigma}: used for tail cutoffs
    double decay_bound(double x) const {
        return sum_abs_w_ * std::pow(M_PI * x, -spec_.sigma);
    }

    cplx s() const { return s_; }
    const ContourSpec& contour() const { return spec_; }

private:
    cplx weight_at(cplx u) const {
        cplx w = mellin_F(u);
        for (size_t i = 0; i < qs_.size(); ++i) {
            if (eps_[i] == 0) continue;
            double e = double(eps_[i]);
            double q = double(qs_[i]);
            cplx numer = 1.0 - e * std::exp((u - s_) * std::log(q));
            cplx denom = 1.0 - e * std::exp((s_ - u - 1.0) * std::log(q));
            w *= numer / denom;
        }
        w *= gamma_ratio((double(iota_) + 1.0 - s_ + u) / 2.0,
                         (double(iota_) + s_ - u) / 2.0);
        w *= std::exp((s_ - 0.5) * std::log(M_PI));
        return w;
    }

    int iota_;
    std::vector<int> eps_;
    std::vector<i64> qs_;
    cplx s_;
    ContourSpec spec_;
    std::vector<cplx> nodes_;
    std::vector<cplx> weights_;
    double tail_err_ = 0;
    double sum_abs_w_ = 0;
};

// closed form of the Mellin transform of V_{iota,eps} = V_{iota,eps,1}
inline cplx mellin_V_closed(int iota, const std::vector<int>& eps,
                            const std::vector<i64>& qs, cplx s0) {
    cplx out = mellin_F(s0);
    for (size_t i = 0; i < qs.size(); ++i) {
        if (eps[i] == 0) continue;
        double e = double(eps[i]);
        double q = double(qs[i]);
        out *= (1.0 - e * std::exp((s0 - 1.0) * std::log(q))) /
               (1.0 - e * std::exp(-s0 * std::log(q)));
    }
    out *= gamma_ratio((double(iota) + s0) / 2.0, (double(iota) + 1.0 - s0) / 2.0);
    out *= std::exp((0.5 - s0) * std::log(M_PI));
    return out;
}

} // namespace ztk
