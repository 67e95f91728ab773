#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iwr {

using Integer = mpz_class;
using Rational = mpq_class;

// Small-integer helpers. Moduli in this library stay well inside int64.

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

inline std::int64_t lcm(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline void require_prime(std::int64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
}

inline void require_odd_prime(std::int64_t p) {
    require_prime(p);
    if (p == 2) throw std::invalid_argument("p = 2 is not supported");
}

// Prime factorization as (prime, exponent) pairs, ascending.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    std::vector<std::pair<std::int64_t, int>> f;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) { n /= d; ++e; }
        f.emplace_back(d, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (auto [q, e] : factorize(n)) out.push_back(q);
    return out;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> d{1};
    for (auto [q, e] : factorize(n)) {
        std::size_t s = d.size();
        std::int64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= q;
            for (std::size_t i = 0; i < s; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t r = n;
    for (auto [q, e] : factorize(n)) r = r / q * (q - 1);
    return r;
}

inline std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t n) {
    Integer r;
    Integer bb = Integer(static_cast<long>(mod(b, n)));
    mpz_powm_ui(r.get_mpz_t(), bb.get_mpz_t(), static_cast<unsigned long>(e),
                Integer(static_cast<long>(n)).get_mpz_t());
    return r.get_si();
}

inline std::int64_t invmod(std::int64_t a, std::int64_t n) {
    Integer r;
    if (!mpz_invert(r.get_mpz_t(), Integer(static_cast<long>(mod(a, n))).get_mpz_t(),
                    Integer(static_cast<long>(n)).get_mpz_t()))
        throw std::domain_error("invmod: not invertible");
    return r.get_si();
}

// Least primitive root modulo an odd prime p.
inline std::int64_t primitive_root(std::int64_t p) {
    require_prime(p);
    if (p == 2) return 1;
    auto qs = prime_divisors(p - 1);
    for (std::int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto q : qs)
            if (powmod(g, (p - 1) / q, p) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root");
}

// Kronecker symbol (D/n), n > 0.
inline int kronecker(std::int64_t D, std::int64_t n) {
    return mpz_kronecker(Integer(static_cast<long>(D)).get_mpz_t(),
                         Integer(static_cast<long>(n)).get_mpz_t());
}

inline Integer ipow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Integer ipow(std::int64_t b, unsigned long e) { return ipow(Integer(static_cast<long>(b)), e); }

// v_p of a nonzero integer.
inline int valuation(const Integer& x, std::int64_t p) {
    if (x == 0) throw std::domain_error("valuation of zero");
    Integer pp(static_cast<long>(p));
    return static_cast<int>(mpz_remove(Integer().get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

// Sentinel for v_p(0).
constexpr int kInfiniteValuation = 1 << 30;

// v_p of a rational; returns kInfiniteValuation for zero.
inline int padic_valuation(const Rational& x, std::int64_t p) {
    require_prime(p);
    if (x == 0) return kInfiniteValuation;
    return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

inline Integer mod(const Integer& a, const Integer& n) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

// x mod n for a p-integral rational x, n a power of p.
inline Integer rational_mod(const Rational& x, const Integer& n) {
    Integer inv;
    if (!mpz_invert(inv.get_mpz_t(), x.get_den().get_mpz_t(), n.get_mpz_t()))
        throw std::domain_error("rational_mod: denominator not invertible");
    return mod(x.get_num() * inv, n);
}

inline Integer binomial(std::int64_t n, std::int64_t k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

}  // namespace iwr
