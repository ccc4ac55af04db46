#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <cmath>

namespace ztk {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

using i64 = long long;
using i128 = __int128;

inline i64 checked_i64(i128 x, const char* ctx) {
    if (x > i128(INT64_MAX) || x < i128(INT64_MIN))
        throw Error(std::string("integer overflow in ") + ctx);
    return static_cast<i64>(x);
}

// Exact rational on 64-bit numerator/denominator, always reduced, d > 0.
// Intermediate products go through 128 bits; results that do not fit
// back into 64 bits throw.
class Rat {
public:
    Rat() : n_(0), d_(1) {}
    Rat(i64 n) : n_(n), d_(1) {}
    Rat(i64 n, i64 d) { assign(n, d); }

    static Rat from_i128(i128 n, i128 d) {
        if (d == 0) throw Error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.n_ = checked_i64(n, "Rat");
        r.d_ = checked_i64(d, "Rat");
        return r;
    }

    i64 num() const { return n_; }
    i64 den() const { return d_; }
    bool is_zero() const { return n_ == 0; }
    bool is_integer() const { return d_ == 1; }
    int sign() const { return n_ > 0 ? 1 : (n_ < 0 ? -1 : 0); }

    double to_double() const { return double(n_) / double(d_); }

    Rat operator-() const { Rat r; r.n_ = -n_; r.d_ = d_; return r; }
    Rat operator+(const Rat& o) const {
        return from_i128(i128(n_) * o.d_ + i128(o.n_) * d_, i128(d_) * o.d_);
    }
    Rat operator-(const Rat& o) const {
        return from_i128(i128(n_) * o.d_ - i128(o.n_) * d_, i128(d_) * o.d_);
    }
    Rat operator*(const Rat& o) const {
        return from_i128(i128(n_) * o.n_, i128(d_) * o.d_);
    }
    Rat operator/(const Rat& o) const {
        if (o.n_ == 0) throw Error("division by zero rational");
        return from_i128(i128(n_) * o.d_, i128(d_) * o.n_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return n_ == o.n_ && d_ == o.d_; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const {
        return i128(n_) * o.d_ < i128(o.n_) * d_;
    }
    bool operator<=(const Rat& o) const { return !(o < *this); }
    bool operator>(const Rat& o) const { return o < *this; }
    bool operator>=(const Rat& o) const { return !(*this < o); }

    Rat abs() const { return n_ < 0 ? -*this : *this; }

    // x - floor(x) in [0,1)
    Rat frac() const {
        i64 q = n_ / d_;
        i64 r = n_ % d_;
        if (r < 0) { r += d_; --q; }
        (void)q;
        Rat out;
        out.n_ = r;
        out.d_ = d_;
        return out;
    }

    Rat pow(int e) const {
        if (e < 0) {
            if (n_ == 0) throw Error("0 to negative power");
            Rat inv; inv.assign(d_, n_);
            return inv.pow(-e);
        }
        Rat acc(1), base = *this;
        while (e > 0) {
            if (e & 1) acc *= base;
            base = (e > 1) ? base * base : base;
            e >>= 1;
        }
        return acc;
    }

    std::string str() const {
        if (d_ == 1) return std::to_string(n_);
        return std::to_string(n_) + "/" + std::to_string(d_);
    }

    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(std::stoll(s));
        return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }

private:
    void assign(i64 n, i64 d) {
        if (d == 0) throw Error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        i64 g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        n_ = n;
        d_ = d;
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }

    i64 n_, d_;
};

inline Rat operator*(i64 a, const Rat& b) { return Rat(a) * b; }
inline Rat operator+(i64 a, const Rat& b) { return Rat(a) + b; }
inline Rat operator-(i64 a, const Rat& b) { return Rat(a) - b; }

// p-adic valuation of a nonzero integer.
inline int valuation_int(i64 n, i64 p) {
    if (n == 0) throw Error("valuation of zero integer");
    if (n < 0) n = -n;
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

constexpr int VAL_INFINITY = INT32_MAX;

// v_p(x) for rational x, +infinity sentinel for x = 0.
inline int valuation(const Rat& x, i64 p) {
    if (p < 2) throw Error("valuation: p must be a prime >= 2");
    if (x.is_zero()) return VAL_INFINITY;
    return valuation_int(x.num(), p) - valuation_int(x.den(), p);
}

// p^k as a rational, k may be negative.
inline Rat rat_pow_prime(i64 p, int k) { return Rat(p).pow(k); }

} // namespace ztk
