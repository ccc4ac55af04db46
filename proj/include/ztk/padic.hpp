#pragma once

#include <complex>
#include <optional>
#include "ztk/sring.hpp"

namespace ztk {

using cplx = std::complex<double>;

using u128 = unsigned __int128;

inline u128 u128_pow(i64 p, int e) {
    u128 r = 1;
    for (int i = 0; i < e; ++i) {
        u128 prev = r;
        r *= u128(p);
        if (r / u128(p) != prev) throw Error("u128_pow overflow");
    }
    return r;
}

// Largest digit count such that p^digits fits comfortably in 128 bits.
inline int max_padic_digits(i64 p) {
    int d = 0;
    u128 acc = 1;
    const u128 limit = (u128(1) << 120);
    while (acc <= limit / u128(p)) { acc *= u128(p); ++d; }
    return d;
}

inline std::string u128_str(u128 x) {
    if (x == 0) return "0";
    std::string s;
    while (x > 0) { s += char('0' + int(x % 10)); x /= 10; }
    std::reverse(s.begin(), s.end());
    return s;
}

// Truncated l-adic number: prime, valuation (VAL_INFINITY for zero), and the
// unit part stored mod l^prec.  Default working precision is 32 digits,
// capped so the modulus fits in 128 bits.
class PadicApprox {
public:
    static constexpr int kDefaultDigits = 32;

    PadicApprox(i64 prime, int val, u128 unit, int prec)
        : p_(prime), val_(val), prec_(prec) {
        if (prec_ < 1) throw Error("PadicApprox: precision must be positive");
        mod_ = u128_pow(p_, prec_);
        unit_ = unit % mod_;
        if (val_ != VAL_INFINITY && unit_ % u128(p_) == 0)
            throw Error("PadicApprox: unit part divisible by p");
    }

    static PadicApprox zero(i64 prime, int prec = kDefaultDigits) {
        PadicApprox z(prime, 0, 1, clamp_prec(prime, prec));
        z.val_ = VAL_INFINITY;
        z.unit_ = 0;
        return z;
    }

    static PadicApprox from_rat(const Rat& x, i64 prime, int prec = kDefaultDigits) {
        prec = clamp_prec(prime, prec);
        if (x.is_zero()) return zero(prime, prec);
        int v = valuation(x, prime);
        Rat unit = x / rat_pow_prime(prime, v);
        u128 mod = u128_pow(prime, prec);
        u128 num = to_residue(unit.num(), mod);
        u128 den = to_residue(unit.den(), mod);
        return PadicApprox(prime, v, mulmod(num, inv_mod(den, mod, prec, prime), mod), prec);
    }

    i64 prime() const { return p_; }
    int val() const { return val_; }
    int precision() const { return prec_; }
    bool is_zero() const { return val_ == VAL_INFINITY; }
    u128 unit() const { return unit_; }

    // unit part reduced mod p^j, j <= precision
    i64 unit_mod(int j) const {
        if (is_zero()) throw Error("unit_mod of zero");
        if (j > prec_) throw Error("unit_mod: requested depth exceeds precision");
        return i64(unit_ % u128_pow(p_, j));
    }

    PadicApprox operator*(const PadicApprox& o) const {
        require_same(o);
        int prec = std::min(prec_, o.prec_);
        if (is_zero() || o.is_zero()) return zero(p_, prec);
        u128 mod = u128_pow(p_, prec);
        return PadicApprox(p_, val_ + o.val_, mulmod(unit_ % mod, o.unit_ % mod, mod), prec);
    }

    PadicApprox operator+(const PadicApprox& o) const {
        require_same(o);
        int prec = std::min(prec_, o.prec_);
        if (is_zero()) return o.truncated(prec);
        if (o.is_zero()) return truncated(prec);
        int v = std::min(val_, o.val_);
        int shift_a = val_ - v, shift_b = o.val_ - v;
        u128 mod = u128_pow(p_, prec);
        u128 a = mulmod(unit_ % mod, u128_pow(p_, std::min(shift_a, prec)) % mod, mod);
        u128 b = mulmod(o.unit_ % mod, u128_pow(p_, std::min(shift_b, prec)) % mod, mod);
        u128 s = (a + b) % mod;
        if (s == 0) return zero(p_, prec); // cancellation to available depth
        int extra = 0;
        while (s % u128(p_) == 0) { s /= u128(p_); ++extra; }
        int kept = prec - extra; // digits lost to cancellation
        if (kept < 1) return zero(p_, prec);
        return PadicApprox(p_, v + extra, s % u128_pow(p_, kept), kept);
    }

    PadicApprox operator-() const {
        if (is_zero()) return *this;
        return PadicApprox(p_, val_, mod_ - unit_, prec_);
    }
    PadicApprox operator-(const PadicApprox& o) const { return *this + (-o); }

    PadicApprox operator*(const Rat& r) const {
        return *this * from_rat(r, p_, prec_);
    }

    PadicApprox truncated(int prec) const {
        if (is_zero()) return zero(p_, prec);
        return PadicApprox(p_, val_, unit_ % u128_pow(p_, prec), prec);
    }

    // equality to the shared available depth
    bool agrees_with(const PadicApprox& o) const {
        require_same(o);
        if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
        if (val_ != o.val_) return false;
        int prec = std::min(prec_, o.prec_);
        u128 mod = u128_pow(p_, prec);
        return unit_ % mod == o.unit_ % mod;
    }

    std::string str() const {
        if (is_zero()) return "0 + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
        return u128_str(unit_) + " * " + std::to_string(p_) + "^" + std::to_string(val_) +
               " + O(" + std::to_string(p_) + "^" + std::to_string(val_ + prec_) + ")";
    }

    static int clamp_prec(i64 prime, int prec) {
        return std::min(prec, max_padic_digits(prime));
    }

private:
    void require_same(const PadicApprox& o) const {
        if (p_ != o.p_) throw Error("PadicApprox: mixed primes");
    }
    static u128 to_residue(i64 x, u128 mod) {
        if (x >= 0) return u128(x) % mod;
        return (mod - (u128(-(x + 1)) + 1) % mod) % mod;
    }
    static u128 mulmod(u128 a, u128 b, u128 mod) {
        // split b to avoid 128-bit overflow: b = hi*2^64 + lo
        u128 lo = b & ((u128(1) << 64) - 1);
        u128 hi = b >> 64;
        u128 r = 0;
        if (hi) {
            u128 t = a % mod;
            for (int i = 0; i < 64; ++i) t = (t << 1) % mod; // t = a*2^64 mod
            r = mulmod_small(t, hi, mod);
        }
        return (r + mulmod_small(a % mod, lo, mod)) % mod;
    }
    static u128 mulmod_small(u128 a, u128 b, u128 mod) {
        // b < 2^64; schoolbook double-and-add on 64 steps max
        u128 r = 0;
        a %= mod;
        while (b) {
            if (b & 1) r = (r + a) % mod;
            a = (a << 1) % mod;
            b >>= 1;
        }
        return r;
    }
    static u128 inv_mod(u128 a, u128 mod, int prec, i64 p) {
        // Newton-Hensel inversion: x_{k+1} = x_k (2 - a x_k)
        i64 a0 = i64(a % u128(p));
        u128 x = u128(mod_inverse(a0, p));
        int digits = 1;
        while (digits < prec) {
            digits *= 2;
            u128 ax = mulmod(a, x, mod);
            u128 two_minus = (2 + mod - ax % mod) % mod;
            x = mulmod(x, two_minus, mod);
        }
        return x;
    }

    i64 p_;
    int val_;
    u128 unit_;
    u128 mod_;
    int prec_;
};

// ---------------------------------------------------------------------------
// modified norm |.|'_l
// ---------------------------------------------------------------------------

// |y|'_l for rational y != 0, exact.
inline Rat modified_norm(const Rat& y, i64 ell) {
    if (y.is_zero()) throw Error("modified_norm: zero input");
    int v = valuation(y, ell);
    if (ell != 2) {
        int fl = (v >= 0) ? v / 2 : -((-v + 1) / 2); // floor(v/2)
        return rat_pow_prime(ell, -2 * fl);
    }
    if (v % 2 != 0) return rat_pow_prime(2, -v + 3);
    Rat y0 = y / rat_pow_prime(2, v);
    i64 r4 = reduce_mod(y0, 4);
    return (r4 == 1) ? rat_pow_prime(2, -v) : rat_pow_prime(2, -v + 2);
}

inline Rat modified_norm(const PadicApprox& y) {
    if (y.is_zero()) throw Error("modified_norm: zero input");
    i64 ell = y.prime();
    int v = y.val();
    if (ell != 2) {
        int fl = (v >= 0) ? v / 2 : -((-v + 1) / 2);
        return rat_pow_prime(ell, -2 * fl);
    }
    if (v % 2 != 0) return rat_pow_prime(2, -v + 3);
    return (y.unit_mod(2) == 1) ? rat_pow_prime(2, -v) : rat_pow_prime(2, -v + 2);
}

// |delta|'_{oo,q} = |delta|_oo * prod_i |delta|'_{q_i}, exact.
inline Rat abs_modified_norm_inf_q(const Rat& delta, const RamificationSet& S) {
    if (delta.is_zero()) throw Error("abs_modified_norm_inf_q: zero input");
    Rat out = delta.abs();
    for (i64 q : S.primes()) out *= modified_norm(delta, q);
    return out;
}

// ---------------------------------------------------------------------------
// fractional part and additive characters
// ---------------------------------------------------------------------------

// <x>_l in [0,1) with l-power denominator; x - <x>_l is l-integral.
inline Rat frac_part(const Rat& x, i64 ell) {
    if (x.is_zero()) return Rat(0);
    int v = valuation(x, ell);
    if (v >= 0) return Rat(0);
    int e = -v;
    i64 le = checked_i64(Rat(ell).pow(e).num(), "frac_part");
    // x = A / (B l^e) with gcd(B,l)=1; <x>_l = (A B^{-1} mod l^e)/l^e
    i64 residue = reduce_mod(x * rat_pow_prime(ell, e), le);
    return Rat(residue, le);
}

// e(x) = exp(2 pi i x) from an exact rational phase, reduced mod 1 first.
inline cplx e_rat(const Rat& x) {
    Rat f = x.frac();
    double angle = 2.0 * M_PI * f.to_double();
    return {std::cos(angle), std::sin(angle)};
}

// e_l(x) = e(-<x>_l); multiplicative character of Q_l, trivial on Z_l.
inline cplx e_ell(const Rat& x, i64 ell) { return e_rat(-frac_part(x, ell)); }

inline Rat frac_part(const PadicApprox& x) {
    if (x.is_zero() || x.val() >= 0) return Rat(0);
    int e = -x.val();
    if (e > x.precision()) throw Error("frac_part: insufficient p-adic precision");
    i64 le = checked_i64(Rat(x.prime()).pow(e).num(), "frac_part");
    return Rat(x.unit_mod(e), le);
}

inline cplx e_ell(const PadicApprox& x) { return e_rat(-frac_part(x)); }

// ---------------------------------------------------------------------------
// Hensel square roots
// ---------------------------------------------------------------------------

inline u128 mul_u128_mod(u128 a, u128 b, u128 mod) {
    u128 r = 0;
    a %= mod;
    b %= mod;
    while (b) {
        if (b & 1) r = (r + a) % mod;
        a = (a << 1) % mod;
        b >>= 1;
    }
    return r;
}

inline u128 inverse_unit(u128 a, i64 p, int prec, u128 mod) {
    i64 a0 = i64(a % u128(p));
    u128 x = u128(mod_inverse(a0, p));
    int digits = 1;
    while (digits < prec) {
        digits *= 2;
        u128 ax = mul_u128_mod(a, x, mod);
        x = mul_u128_mod(x, (2 + mod - ax) % mod, mod);
    }
    return x;
}

// A square root of N in Q_l to the requested precision, if one exists.
inline std::optional<PadicApprox> sqrt_padic(const Rat& N, i64 ell,
                                             int prec = PadicApprox::kDefaultDigits) {
    if (N.is_zero()) throw Error("sqrt_padic: N must be nonzero");
    prec = PadicApprox::clamp_prec(ell, prec);
    int v = valuation(N, ell);
    if (v % 2 != 0) return std::nullopt;
    Rat unit = N / rat_pow_prime(ell, v);
    u128 mod = u128_pow(ell, prec);
    i64 u_mod_small = reduce_mod(unit, ell == 2 ? 8 : ell);

    u128 x;
    if (ell != 2) {
        if (kronecker(u_mod_small, ell) != 1) return std::nullopt;
        // find a root mod l, then Newton-lift
        i64 r0 = -1;
        for (i64 t = 1; t < ell; ++t)
            if ((i128(t) * t - u_mod_small) % ell == 0) { r0 = t; break; }
        if (r0 < 0) return std::nullopt;
        PadicApprox target = PadicApprox::from_rat(unit, ell, prec);
        x = u128(r0);
        int digits = 1;
        while (digits < prec) {
            digits *= 2;
            // x <- x - (x^2 - u) / (2x) computed mod l^prec
            u128 x2 = mul_u128_mod(x, x, mod);
            u128 diff = (x2 + mod - (u128(target.unit()) % mod)) % mod;
            u128 inv_2x = inverse_unit(mul_u128_mod(2 % mod, x, mod), ell, prec, mod);
            u128 corr = mul_u128_mod(diff, inv_2x, mod);
            x = (x + mod - corr) % mod;
        }
    } else {
        if (u_mod_small % 8 != 1) return std::nullopt;
        // binary Hensel: refine bit by bit
        u128 target = u128(PadicApprox::from_rat(unit, 2, prec).unit());
        x = 1;
        for (int j = 3; j < prec; ++j) {
            u128 modj1 = u128_pow(2, j + 1);
            u128 diff = (mul_u128_mod(x, x, mod) + mod - target) % mod;
            if (diff % modj1 != 0) x += u128_pow(2, j - 1);
        }
    }
    return PadicApprox(ell, v / 2, x, prec);
}

// ---------------------------------------------------------------------------
// quadratic shell character omega_l and Gauss sums
// ---------------------------------------------------------------------------

// omega from t = y^2 - 4N != 0: Kronecker symbol of t |t|'_l at l.
inline int omega_from_t(const Rat& t, i64 ell) {
    if (t.is_zero()) throw Error("omega_ell: y^2 = 4N is excluded");
    int v = valuation(t, ell);
    Rat unit = t / rat_pow_prime(ell, v);
    if (ell != 2) {
        if (v % 2 != 0) return 0;
        return kronecker(reduce_mod(unit, ell), ell);
    }
    if (v % 2 != 0) return 0;          // t|t|' = 8 * unit, even
    i64 u4 = reduce_mod(unit, 4);
    if (u4 == 3) return 0;             // t|t|' = 4 * unit, even
    i64 u8 = reduce_mod(unit, 8);
    return (u8 == 1) ? 1 : -1;         // unit = 1 or 5 mod 8
}

inline int omega_ell(const Rat& y, const Rat& N, i64 ell) {
    return omega_from_t(y * y - Rat(4) * N, ell);
}

inline int omega_from_t(const PadicApprox& t) {
    if (t.is_zero()) throw Error("omega_ell: singular point");
    i64 ell = t.prime();
    if (ell != 2) {
        if (t.val() % 2 != 0) return 0;
        return kronecker(t.unit_mod(1), ell);
    }
    if (t.val() % 2 != 0) return 0;
    i64 u = t.unit_mod(3);
    if (u % 4 == 3) return 0;
    return (u % 8 == 1) ? 1 : -1;
}

// Gauss sum g_l^{+-} = sum over residues/non-residues x of e(x/l), l odd.
inline cplx gauss_sum(i64 ell, int sign) {
    if (ell == 2) throw Error("gauss_sum: l = 2 rejected");
    if (!is_prime(ell)) throw Error("gauss_sum: l must be prime");
    if (sign != 1 && sign != -1) throw Error("gauss_sum: sign must be +-1");
    cplx acc = 0;
    for (i64 x = 1; x < ell; ++x)
        if (kronecker(x, ell) == sign) acc += e_rat(Rat(x, ell));
    return acc;
}

} // namespace ztk
