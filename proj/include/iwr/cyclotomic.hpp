#pragma once

#include "iwr/numtheory.hpp"
#include "iwr/padic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

namespace detail {

inline IntPoly poly_exact_div(IntPoly a, const IntPoly& b) {
    // b monic
    if (a.size() < b.size()) return {0};
    IntPoly q(a.size() - b.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
        Integer c = a[k + b.size() - 1];
        q[k] = c;
        if (c != 0)
            for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= c * b[j];
    }
    return q;
}

}  // namespace detail

// n-th cyclotomic polynomial, low to high. Cached.
inline const IntPoly& cyclotomic_polynomial(std::int64_t n) {
    static std::mutex mu;
    static std::map<std::int64_t, std::shared_ptr<IntPoly>> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return *it->second;
    }
    IntPoly f(static_cast<std::size_t>(n) + 1, 0);
    f[0] = -1;
    f[static_cast<std::size_t>(n)] = 1;
    for (auto d : divisors(n))
        if (d < n) f = detail::poly_exact_div(f, cyclotomic_polynomial(d));
    std::lock_guard<std::mutex> lk(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<IntPoly>(std::move(f));
    return *slot;
}

// Element of Q(zeta_n) in the power basis modulo Phi_n, stored as integer
// numerators over one positive denominator.
class CyclotomicNumber {
public:
    CyclotomicNumber() : CyclotomicNumber(1) {}

    explicit CyclotomicNumber(std::int64_t n) : n_(n), num_(static_cast<std::size_t>(euler_phi(n)), 0), den_(1) {
        if (n < 1) throw std::invalid_argument("CyclotomicNumber: order must be positive");
    }

    static CyclotomicNumber rational(const Rational& q, std::int64_t n = 1) {
        CyclotomicNumber z(n);
        z.num_[0] = q.get_num();
        z.den_ = q.get_den();
        return z;
    }

    static CyclotomicNumber zeta(std::int64_t n, std::int64_t k = 1) {
        std::vector<Integer> v(static_cast<std::size_t>(n), 0);
        v[static_cast<std::size_t>(mod(k, n))] = 1;
        return from_exponent_vector(n, v);
    }

    // sum_k v[k] zeta_n^k for a length-n integer vector.
    static CyclotomicNumber from_exponent_vector(std::int64_t n, std::vector<Integer> v, const Integer& den = 1) {
        CyclotomicNumber z(n);
        reduce_into(n, v, z.num_);
        z.den_ = den;
        z.normalize();
        return z;
    }

    static CyclotomicNumber from_coefficients(std::int64_t n, const std::vector<Rational>& c) {
        if (static_cast<std::int64_t>(c.size()) != euler_phi(n))
            throw std::invalid_argument("CyclotomicNumber: wrong coefficient count");
        Integer den = 1;
        for (auto& q : c) den = lcm_int(den, q.get_den());
        CyclotomicNumber z(n);
        for (std::size_t i = 0; i < c.size(); ++i) z.num_[i] = c[i].get_num() * (den / c[i].get_den());
        z.den_ = den;
        z.normalize();
        return z;
    }

    std::int64_t order() const { return n_; }
    std::size_t degree() const { return num_.size(); }

    Rational coeff(std::size_t i) const {
        Rational q(num_[i], den_);
        q.canonicalize();
        return q;
    }

    std::vector<Rational> coefficients() const {
        std::vector<Rational> c;
        for (std::size_t i = 0; i < num_.size(); ++i) c.push_back(coeff(i));
        return c;
    }

    bool is_zero() const {
        for (auto& a : num_)
            if (a != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < num_.size(); ++i)
            if (num_[i] != 0) return false;
        return true;
    }

    Rational to_rational() const {
        if (!is_rational()) throw std::domain_error("CyclotomicNumber: not rational");
        return coeff(0);
    }

    // Same element viewed in Q(zeta_m), n | m.
    CyclotomicNumber lift(std::int64_t m) const {
        if (m % n_) throw std::invalid_argument("CyclotomicNumber: lift order must be a multiple");
        if (m == n_) return *this;
        std::int64_t s = m / n_;
        std::vector<Integer> v(static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < num_.size(); ++i) v[i * s] = num_[i];
        return from_exponent_vector(m, v, den_);
    }

    // zeta_n -> zeta_n^k, gcd(k, n) = 1.
    CyclotomicNumber galois(std::int64_t k) const {
        if (gcd(mod(k, n_), n_) != 1 && n_ > 1) throw std::invalid_argument("galois: k not a unit");
        std::vector<Integer> v(static_cast<std::size_t>(n_), 0);
        for (std::size_t i = 0; i < num_.size(); ++i)
            v[static_cast<std::size_t>(mod(static_cast<std::int64_t>(i) * k, n_))] += num_[i];
        return from_exponent_vector(n_, v, den_);
    }

    CyclotomicNumber conj() const { return galois(-1); }

    // Absolute norm to Q.
    Rational norm() const {
        CyclotomicNumber r = rational(1, n_);
        for (std::int64_t k = 1; k <= std::max<std::int64_t>(n_, 1); ++k)
            if (gcd(k, n_) == 1) r = r * galois(k);
        return r.to_rational();
    }

    CyclotomicNumber inverse() const {
        if (is_zero()) throw std::domain_error("CyclotomicNumber: inverse of zero");
        CyclotomicNumber r = rational(1, n_);
        for (std::int64_t k = 2; k < n_; ++k)
            if (gcd(k, n_) == 1) r = r * galois(k);
        Rational N = (r * *this).to_rational();
        return r * rational(1 / N, n_);
    }

    CyclotomicNumber pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CyclotomicNumber r = rational(1, n_), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    CyclotomicNumber operator-() const {
        CyclotomicNumber r = *this;
        for (auto& a : r.num_) a = -a;
        return r;
    }

    friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.n_ != b.n_) {
            std::int64_t m = lcm(a.n_, b.n_);
            return a.lift(m) + b.lift(m);
        }
        CyclotomicNumber r(a.n_);
        r.den_ = a.den_ * b.den_;
        for (std::size_t i = 0; i < r.num_.size(); ++i) r.num_[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
        r.normalize();
        return r;
    }

    friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) { return a + (-b); }

    friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.n_ != b.n_) {
            std::int64_t m = lcm(a.n_, b.n_);
            return a.lift(m) * b.lift(m);
        }
        std::size_t d = a.num_.size();
        std::vector<Integer> prod(2 * d - 1, 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (a.num_[i] == 0) continue;
            for (std::size_t j = 0; j < d; ++j)
                if (b.num_[j] != 0) mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
        }
        CyclotomicNumber r(a.n_);
        reduce_poly(a.n_, prod, r.num_);
        r.den_ = a.den_ * b.den_;
        r.normalize();
        return r;
    }

    friend CyclotomicNumber operator*(const CyclotomicNumber& a, const Rational& q) {
        return a * rational(q, a.n_);
    }

    friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) { return (a - b).is_zero(); }
    friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

    // e.g. "5*z^3-5*z^2-3", z = zeta_n.
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = num_.size(); i-- > 0;) {
            Rational c = coeff(i);
            if (c == 0) continue;
            if (!first && c > 0) os << "+";
            if (i == 0) os << c.get_str();
            else {
                if (c == -1) os << "-";
                else if (c != 1) os << c.get_str() << "*";
                os << "z";
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    static Integer lcm_int(const Integer& a, const Integer& b) {
        Integer r;
        mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return r;
    }

    // Reduce a polynomial of any degree modulo Phi_n.
    static void reduce_poly(std::int64_t n, std::vector<Integer>& v, std::vector<Integer>& out) {
        std::vector<Integer> w(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < v.size(); ++i) w[i % static_cast<std::size_t>(n)] += v[i];
        reduce_into(n, w, out);
    }

    // v has length n (exponents mod n); divide by Phi_n.
    static void reduce_into(std::int64_t n, std::vector<Integer>& v, std::vector<Integer>& out) {
        const IntPoly& phi = cyclotomic_polynomial(n);
        std::size_t d = phi.size() - 1;
        std::vector<std::pair<std::size_t, Integer>> nz;
        for (std::size_t j = 0; j < d; ++j)
            if (phi[j] != 0) nz.emplace_back(j, phi[j]);
        for (std::size_t i = v.size(); i-- > d;) {
            if (v[i] == 0) continue;
            Integer c = v[i];
            v[i] = 0;
            for (auto& [j, pj] : nz) mpz_submul(v[i - d + j].get_mpz_t(), c.get_mpz_t(), pj.get_mpz_t());
        }
        out.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d));
    }

    void normalize() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& a : num_) a = -a;
        }
        Integer g = den_;
        for (auto& a : num_) {
            if (g == 1) break;
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        }
        if (g != 1) {
            for (auto& a : num_) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
            den_ /= g;
        }
    }

    std::int64_t n_ = 1;
    std::vector<Integer> num_;
    Integer den_ = 1;
};

// Fixed embedding Q(zeta_n) -> Q_p for n | p - 1: zeta_n maps to the
// Teichmueller lift of g^((p-1)/n), g the least primitive root mod p.
struct PadicEmbedding {
    std::int64_t order = 1;
    std::int64_t prime = 3;
    std::int64_t generator = 1;  // g
    std::int64_t seed = 1;       // residue of the image of zeta_n
    int precision = 1;
    PadicNumber root;

    std::string describe() const {
        std::ostringstream os;
        os << "zeta_" << order << " -> teich(" << seed << ") in Z_" << prime << " (g=" << generator << ")";
        return os.str();
    }
};

inline PadicEmbedding make_embedding(std::int64_t n, std::int64_t p, int M) {
    require_odd_prime(p);
    if ((p - 1) % n) throw std::invalid_argument("make_embedding: need n | p - 1 (degree-1 prime)");
    PadicEmbedding e;
    e.order = n;
    e.prime = p;
    e.generator = primitive_root(p);
    e.seed = powmod(e.generator, (p - 1) / n, p);
    e.precision = M;
    e.root = teichmuller_lift(e.seed, p, M);
    return e;
}

inline PadicNumber embed_cyclotomic(const CyclotomicNumber& z, const PadicEmbedding& e) {
    if (e.order % z.order()) throw std::invalid_argument("embed_cyclotomic: order mismatch");
    CyclotomicNumber w = z.lift(e.order);
    PadicNumber acc = PadicNumber::zero(e.prime, e.precision);
    PadicNumber rk = PadicNumber::from_int(1, e.prime, e.precision);
    for (std::size_t i = 0; i < w.degree(); ++i) {
        Rational c = w.coeff(i);
        if (c != 0) acc = acc + PadicNumber::from_rational(c, e.prime, e.precision) * rk;
        rk = rk * e.root;
    }
    return acc;
}

}  // namespace iwr
