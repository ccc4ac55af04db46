#pragma once

#include <map>
#include <vector>
#include <cmath>
#include "ztk/rational.hpp"

namespace ztk {

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Trial-division factorization: (prime, exponent) pairs in increasing order.
inline std::vector<std::pair<i64, int>> factorize(i64 n) {
    if (n == 0) throw Error("factorize(0)");
    if (n < 0) n = -n;
    std::vector<std::pair<i64, int>> out;
    for (i64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            out.push_back({d, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline std::vector<i64> divisors(i64 n) {
    auto fac = factorize(n);
    std::vector<i64> out{1};
    for (auto [p, e] : fac) {
        size_t sz = out.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk = checked_i64(i128(pk) * p, "divisors");
            for (size_t i = 0; i < sz; ++i)
                out.push_back(checked_i64(i128(out[i]) * pk, "divisors"));
        }
    }
    return out;
}

inline int mu(i64 n) {
    if (n < 1) throw Error("mu: n must be >= 1");
    int m = 0;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        ++m;
    }
    return (m % 2 == 0) ? 1 : -1;
}

// von Mangoldt: returns p if n = p^m, else 0.  lambda_vm(n) = log of that (0 for log 1).
inline i64 mangoldt_prime(i64 n) {
    if (n < 1) throw Error("mangoldt: n must be >= 1");
    if (n == 1) return 0;
    auto fac = factorize(n);
    return fac.size() == 1 ? fac[0].first : 0;
}

inline double lambda_vm(i64 n) {
    i64 p = mangoldt_prime(n);
    return p ? std::log(double(p)) : 0.0;
}

inline i64 num_divisors(i64 n) {
    if (n < 1) throw Error("num_divisors: n must be >= 1");
    i64 d = 1;
    for (auto [p, e] : factorize(n)) d *= (e + 1);
    return d;
}

inline int num_prime_divisors(i64 n) {
    if (n < 1) throw Error("num_prime_divisors: n must be >= 1");
    return int(factorize(n).size());
}

inline i64 radical(i64 n) {
    if (n < 1) throw Error("radical: n must be >= 1");
    i64 r = 1;
    for (auto [p, e] : factorize(n)) r *= p;
    return r;
}

// Full Kronecker symbol (a|n), any integers.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v2 = 0;
    while (n % 2 == 0) { n /= 2; ++v2; }
    if (v2 > 0) {
        if (a % 2 == 0) return 0;
        if (v2 % 2 == 1) {
            i64 a8 = a % 8;
            if (a8 < 0) a8 += 8;
            if (a8 == 3 || a8 == 5) result = -result;
        }
    }
    // now n odd positive: Jacobi part
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 n8 = n % 8;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

// Kronecker symbol with rational numerator x reduced modulo odd positive k
// (denominator of x must be invertible mod k).
inline int kronecker_rat(const Rat& x, i64 k) {
    if (k <= 0 || k % 2 == 0) throw Error("kronecker_rat: k must be odd positive");
    if (k == 1) return 1;
    i64 d = x.den() % k;
    if (d == 0 || std::gcd(d, k) != 1)
        throw Error("kronecker_rat: denominator not invertible mod k");
    // inverse of d mod k
    i64 t = 0, newt = 1, r = k, newr = d;
    while (newr != 0) {
        i64 q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (t < 0) t += k;
    i64 num = x.num() % k;
    if (num < 0) num += k;
    i64 red = checked_i64(i128(num) * t % k, "kronecker_rat");
    return kronecker(red, k);
}

inline i64 mod_inverse(i64 a, i64 m) {
    a %= m;
    if (a < 0) a += m;
    i64 t = 0, newt = 1, r = m, newr = a;
    while (newr != 0) {
        i64 q = r / newr;
        std::swap(t -= q * newt, newt);
        std::swap(r -= q * newr, newr);
    }
    if (r != 1) throw Error("mod_inverse: not invertible");
    if (t < 0) t += m;
    return t;
}

// Reduce rational x modulo m > 0 (denominator must be coprime to m).
inline i64 reduce_mod(const Rat& x, i64 m) {
    if (m <= 0) throw Error("reduce_mod: m must be positive");
    if (m == 1) return 0;
    i64 num = x.num() % m;
    if (num < 0) num += m;
    i64 den = x.den() % m;
    if (std::gcd(den, m) != 1) throw Error("reduce_mod: denominator shares factor with modulus");
    return checked_i64(i128(num) * mod_inverse(den, m) % m, "reduce_mod");
}

// sum_{f|n} (1/f) sum_{k|n/f} mu(k)/k; identically 1.
inline Rat moebius_identity_1(i64 n) {
    if (n < 1) throw Error("moebius_identity_1: n must be >= 1");
    Rat acc(0);
    for (i64 f : divisors(n)) {
        Rat inner(0);
        for (i64 k : divisors(n / f)) inner += Rat(mu(k), k);
        acc += Rat(1, f) * inner;
    }
    return acc;
}

// The two log-weighted sums of the Moebius/von Mangoldt identity, kept exact:
// each sum is a Q-linear combination of log p over primes p | n, and the
// identity states coeff-by-coeff equality with +/- sum_{d|n} Lambda(d)/d.
struct LogCombination {
    std::map<i64, Rat> coeff; // prime -> rational coefficient of log(prime)
    double value() const {
        double v = 0;
        for (auto& [p, c] : coeff) v += c.to_double() * std::log(double(p));
        return v;
    }
    void add(i64 prime, const Rat& c) {
        auto it = coeff.find(prime);
        if (it == coeff.end()) coeff[prime] = c;
        else {
            it->second += c;
            if (it->second.is_zero()) coeff.erase(it);
        }
    }
    bool operator==(const LogCombination& o) const { return coeff == o.coeff; }
    LogCombination operator-() const {
        LogCombination r;
        for (auto& [p, c] : coeff) r.coeff[p] = -c;
        return r;
    }
};

struct MoebiusIdentity2 {
    LogCombination lhs1;   // sum_f (log f / f) sum_{k|n/f} mu(k)/k
    LogCombination lhs2;   // sum_f (1/f) sum_{k|n/f} mu(k) log k / k
    LogCombination lambda; // sum_{d|n} Lambda(d)/d
};

inline MoebiusIdentity2 moebius_identity_2(i64 n) {
    if (n < 1) throw Error("moebius_identity_2: n must be >= 1");
    MoebiusIdentity2 out;
    for (i64 f : divisors(n)) {
        Rat inv_f(1, f);
        for (i64 k : divisors(n / f)) {
            Rat w = inv_f * Rat(mu(k), k);
            for (auto [p, e] : factorize(f)) out.lhs1.add(p, w * Rat(e));
            for (auto [p, e] : factorize(k)) out.lhs2.add(p, w * Rat(e));
        }
    }
    for (i64 d : divisors(n)) {
        i64 p = mangoldt_prime(d);
        if (p) out.lambda.add(p, Rat(1, d));
    }
    return out;
}

} // namespace ztk
