#pragma once

#include <algorithm>
#include <optional>
#include "ztk/arith.hpp"

namespace ztk {

// S = {oo, q_1, ..., q_r}; the archimedean place is implicit, the finite
// primes are stored sorted.  2 is required to be in S.
class RamificationSet {
public:
    explicit RamificationSet(std::vector<i64> primes) : primes_(std::move(primes)) {
        std::sort(primes_.begin(), primes_.end());
        if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end())
            throw Error("RamificationSet: primes must be pairwise distinct");
        for (i64 p : primes_)
            if (!is_prime(p)) throw Error("RamificationSet: " + std::to_string(p) + " is not prime");
        if (!contains(2)) throw Error("RamificationSet: 2 must belong to S");
    }

    const std::vector<i64>& primes() const { return primes_; }
    size_t size() const { return primes_.size(); }
    bool contains(i64 p) const {
        return std::binary_search(primes_.begin(), primes_.end(), p);
    }
    bool coprime(i64 n) const {
        if (n == 0) return false;
        for (i64 p : primes_)
            if (n % p == 0) return false;
        return true;
    }
    std::string str() const {
        std::string s = "{oo";
        for (i64 p : primes_) s += "," + std::to_string(p);
        return s + "}";
    }

private:
    std::vector<i64> primes_;
};

inline bool in_s_integers(const Rat& x, const RamificationSet& S) {
    if (x.is_zero()) return true;
    for (auto [p, e] : factorize(x.den()))
        if (!S.contains(p)) return false;
    return true;
}

// Element of Z^S: rational whose denominator is supported on S.
class SRational {
public:
    SRational(Rat v, RamificationSet S) : v_(v), S_(std::move(S)) {
        if (!in_s_integers(v_, S_))
            throw Error("SRational: " + v_.str() + " is not an S-integer for S=" + S_.str());
    }
    const Rat& value() const { return v_; }
    const RamificationSet& S() const { return S_; }

private:
    Rat v_;
    RamificationSet S_;
};

// a = a_(l) * a^(l) with a_(l) = l^{v_l(a)}.
inline std::pair<Rat, Rat> split_valuation(const Rat& a, i64 ell) {
    if (a.is_zero()) throw Error("split_valuation: zero input");
    Rat part = rat_pow_prime(ell, valuation(a, ell));
    return {part, a / part};
}

// a_(q) = prod over q_i in S of the q_i-parts; a^(q) the S-free complement.
inline std::pair<Rat, Rat> split_q(const Rat& a, const RamificationSet& S) {
    if (a.is_zero()) throw Error("split_q: zero input");
    Rat part(1);
    for (i64 q : S.primes()) part *= rat_pow_prime(q, valuation(a, q));
    return {part, a / part};
}

// |a^(q)| as a positive integer (the prime-to-S content of a).
inline i64 prime_to_s_part(const Rat& a, const RamificationSet& S) {
    Rat t = split_q(a, S).second;
    if (!t.is_integer()) throw Error("prime_to_s_part: internal");
    return t.num() < 0 ? -t.num() : t.num();
}

// delta = sigma^2 D with D a fundamental discriminant; carries the data the
// functional equation needs: tau_delta, iota, and epsilon_i = (tau|q_i).
struct Discriminant {
    Rat delta;
    i64 sigma = 1;           // positive
    i64 D = 1;               // fundamental discriminant (or 1 for squares)
    Rat tau;                 // delta / sigma_(q)^2 = (sigma^(q))^2 D
    int iota = 0;            // 0 if delta > 0, 1 if delta < 0
    std::vector<int> epsilon; // per q_i in S order
    bool square = false;     // true iff delta is a square in Z^S
};

inline i64 squarefree_kernel(i64 n) {
    i64 k = 1;
    for (auto [p, e] : factorize(n))
        if (e % 2 == 1) k *= p;
    return k;
}

inline Discriminant decompose_discriminant(const Rat& delta, const RamificationSet& S) {
    if (delta.is_zero()) throw Error("decompose_discriminant: delta = 0");
    if (!delta.is_integer())
        throw Error("decompose_discriminant: delta must be an integer");
    i64 d = delta.num();
    i64 mod4 = ((d % 4) + 4) % 4;
    if (mod4 == 2 || mod4 == 3)
        throw Error("decompose_discriminant: delta must be 0 or 1 mod 4");
    if (!in_s_integers(delta, S)) throw Error("decompose_discriminant: delta not in Z^S");

    i64 s0 = squarefree_kernel(d < 0 ? -d : d);
    if (d < 0) s0 = -s0;
    i64 D = (((s0 % 4) + 4) % 4 == 1) ? s0 : 4 * s0;
    i64 sq = d / D; // perfect square by construction
    i64 sigma = i64(std::llround(std::sqrt(double(sq))));
    while (sigma * sigma < sq) ++sigma;
    while (sigma * sigma > sq) --sigma;
    if (sigma * sigma != sq || checked_i64(i128(sigma) * sigma * D, "decompose") != d)
        throw Error("decompose_discriminant: internal decomposition failure");

    Discriminant out;
    out.delta = delta;
    out.sigma = sigma;
    out.D = D;
    Rat sigma_q = split_q(Rat(sigma), S).first;
    out.tau = delta / (sigma_q * sigma_q);
    out.iota = d > 0 ? 0 : 1;
    out.square = (D == 1);
    if (!out.tau.is_integer()) throw Error("decompose_discriminant: tau not integral");
    for (i64 q : S.primes()) out.epsilon.push_back(kronecker(out.tau.num(), q));
    return out;
}

// Indicator delta(a;b): 1 iff x^2 = a (mod b) is solvable.  b positive,
// coprime to S (hence odd); a in Z^S.
inline int solvable(const Rat& a, i64 b, const RamificationSet& S) {
    if (b <= 0) throw Error("solvable: modulus must be positive");
    if (!S.coprime(b) && b != 1)
        throw Error("solvable: modulus shares a factor with S");
    if (b == 1) return 1;
    for (auto [p, e] : factorize(b)) {
        i64 pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        i64 ar = reduce_mod(a, pe);
        if (ar == 0) continue;
        int j = valuation_int(ar, p);
        if (j >= e) continue;
        if (j % 2 == 1) return 0;
        i64 unit = ar;
        for (int i = 0; i < j; ++i) unit /= p;
        if (kronecker(unit % p, p) != 1) return 0; // p odd since 2 in S
    }
    return 1;
}

} // namespace ztk
