#pragma once

#include "iwr/numtheory.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

// Element of Q_p stored as p^v * u with u a unit known mod p^prec (relative
// precision). Zero carries the absolute precision to which it is known.
class PadicNumber {
public:
    PadicNumber() = default;

    static PadicNumber zero(std::int64_t p, int abs_prec) {
        PadicNumber z;
        z.p_ = p;
        z.zero_ = true;
        z.val_ = abs_prec;
        z.prec_ = 0;
        return z;
    }

    // x known modulo p^abs_prec.
    static PadicNumber from_integer_mod(const Integer& x, std::int64_t p, int abs_prec) {
        Integer m = ipow(p, static_cast<unsigned long>(std::max(abs_prec, 0)));
        Integer r = mod(x, m);
        if (r == 0) return zero(p, abs_prec);
        int v = iwr::valuation(r, p);
        Integer u = r / ipow(p, static_cast<unsigned long>(v));
        return make(p, v, u, abs_prec - v);
    }

    // Exact rational truncated to relative precision prec.
    static PadicNumber from_rational(const Rational& x, std::int64_t p, int prec) {
        if (prec <= 0) throw std::invalid_argument("PadicNumber: precision must be positive");
        if (x == 0) return zero(p, prec);
        int v = padic_valuation(x, p);
        Rational y = x;
        if (v > 0) y /= Rational(ipow(p, v));
        if (v < 0) y *= Rational(ipow(p, -v));
        return make(p, v, rational_mod(y, ipow(p, prec)), prec);
    }

    static PadicNumber from_int(std::int64_t x, std::int64_t p, int prec) {
        return from_rational(Rational(Integer(static_cast<long>(x))), p, prec);
    }

    std::int64_t prime() const { return p_; }
    bool is_zero() const { return zero_; }
    // For zero this is a lower bound (the absolute precision).
    int valuation() const { return val_; }
    int relative_precision() const { return prec_; }
    int absolute_precision() const { return zero_ ? val_ : val_ + prec_; }
    const Integer& unit() const { return unit_; }
    bool is_unit() const { return !zero_ && val_ == 0; }

    // Representative in [0, p^k) of an integral element, k <= absolute precision.
    Integer residue(int k) const {
        if (k > absolute_precision()) throw std::domain_error("PadicNumber: residue beyond precision");
        if (zero_) return 0;
        if (val_ < 0) throw std::domain_error("PadicNumber: residue of a non-integral element");
        Integer m = ipow(p_, static_cast<unsigned long>(k));
        return mod(unit_ * ipow(p_, val_), m);
    }

    PadicNumber operator-() const {
        if (zero_) return *this;
        return make(p_, val_, mod(-unit_, modulus()), prec_);
    }

    friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
        a.check(b);
        int A = std::min(a.absolute_precision(), b.absolute_precision());
        if (a.zero_ && b.zero_) return zero(a.p_, A);
        if (a.zero_) return b.truncate_abs(A);
        if (b.zero_) return a.truncate_abs(A);
        int v0 = std::min(a.val_, b.val_);
        if (A <= v0) return zero(a.p_, A);
        Integer s = a.unit_ * ipow(a.p_, a.val_ - v0) + b.unit_ * ipow(a.p_, b.val_ - v0);
        Integer m = ipow(a.p_, A - v0);
        s = mod(s, m);
        if (s == 0) return zero(a.p_, A);
        int w = iwr::valuation(s, a.p_);
        return make(a.p_, v0 + w, s / ipow(a.p_, w), A - v0 - w);
    }

    friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

    friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
        a.check(b);
        if (a.zero_ || b.zero_) {
            int A;
            if (a.zero_ && b.zero_) A = a.val_ + b.val_;
            else if (a.zero_) A = a.val_ + b.val_;
            else A = a.val_ + b.val_;
            return zero(a.p_, A);
        }
        int pr = std::min(a.prec_, b.prec_);
        return make(a.p_, a.val_ + b.val_, mod(a.unit_ * b.unit_, ipow(a.p_, pr)), pr);
    }

    PadicNumber inverse() const {
        if (zero_) throw std::domain_error("PadicNumber: inverse of zero");
        Integer inv;
        mpz_invert(inv.get_mpz_t(), unit_.get_mpz_t(), modulus().get_mpz_t());
        return make(p_, -val_, inv, prec_);
    }

    friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

    PadicNumber pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        PadicNumber r = from_int(1, p_, zero_ ? std::max(val_, 1) : prec_);
        PadicNumber b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // Agreement to the smaller absolute precision of the two.
    bool equals(const PadicNumber& o) const { return (*this - o).is_zero(); }

    // Valuation/unit-digit rendering "v:u"; zero renders as "A:0".
    std::string str() const {
        std::ostringstream os;
        if (zero_) os << val_ << ":0";
        else os << val_ << ":" << unit_.get_str();
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const PadicNumber& x) { return os << x.str(); }

private:
    static PadicNumber make(std::int64_t p, int v, const Integer& u, int prec) {
        if (prec <= 0) return zero(p, v);
        PadicNumber x;
        x.p_ = p;
        x.val_ = v;
        x.prec_ = prec;
        x.unit_ = mod(u, ipow(p, prec));
        x.zero_ = false;
        return x;
    }

    Integer modulus() const { return ipow(p_, static_cast<unsigned long>(prec_)); }

    PadicNumber truncate_abs(int A) const {
        if (zero_) return zero(p_, std::min(A, val_));
        if (A <= val_) return zero(p_, A);
        return make(p_, val_, unit_, std::min(prec_, A - val_));
    }

    void check(const PadicNumber& o) const {
        if (p_ != o.p_) throw std::invalid_argument("PadicNumber: prime mismatch");
    }

    std::int64_t p_ = 2;
    int val_ = 0;
    int prec_ = 0;
    Integer unit_ = 0;
    bool zero_ = true;
};

// Teichmueller representative of a mod p, to M digits.
inline PadicNumber teichmuller_lift(std::int64_t a, std::int64_t p, int M) {
    require_odd_prime(p);
    if (mod(a, p) == 0) throw std::domain_error("teichmuller_lift: a divisible by p");
    Integer m = ipow(p, static_cast<unsigned long>(M));
    Integer x = mod(Integer(static_cast<long>(a)), m);
    Integer pp(static_cast<long>(p));
    for (int i = 0; i <= M; ++i) mpz_powm(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t(), m.get_mpz_t());
    return PadicNumber::from_integer_mod(x, p, M);
}

// Integer polynomial, coefficients low to high.
using IntPoly = std::vector<Integer>;

inline Integer eval_mod(const IntPoly& f, const Integer& x, const Integer& m) {
    Integer r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = mod(r * x + *it, m);
    return r;
}

inline IntPoly derivative(const IntPoly& f) {
    IntPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
    return d;
}

// Simple root of f lifting seed, to M digits.
inline PadicNumber hensel_root(const IntPoly& f, std::int64_t seed, std::int64_t p, int M) {
    require_prime(p);
    Integer pp(static_cast<long>(p));
    Integer x = mod(Integer(static_cast<long>(seed)), pp);
    if (eval_mod(f, x, pp) != 0) throw std::domain_error("hensel_root: seed is not a root mod p");
    IntPoly df = derivative(f);
    if (eval_mod(df, x, pp) == 0) throw std::domain_error("hensel_root: seed is not a simple root");
    int k = 1;
    while (k < M) {
        k = std::min(2 * k, M);
        Integer m = ipow(p, static_cast<unsigned long>(k));
        Integer fx = eval_mod(f, x, m), dfx = eval_mod(df, x, m), inv;
        mpz_invert(inv.get_mpz_t(), dfx.get_mpz_t(), m.get_mpz_t());
        x = mod(x - fx * inv, m);
    }
    return PadicNumber::from_integer_mod(x, p, M);
}

// log of a 1-unit; the result is known to the input's absolute precision.
inline PadicNumber padic_log(const PadicNumber& x) {
    std::int64_t p = x.prime();
    if (p == 2) throw std::invalid_argument("padic_log: p = 2 is not supported");
    if (x.is_zero() || x.valuation() != 0) throw std::domain_error("padic_log: not a 1-unit");
    int A = x.absolute_precision();
    PadicNumber y = x - PadicNumber::from_int(1, p, A);
    if (y.is_zero()) return PadicNumber::zero(p, A);
    int vy = y.valuation();
    if (vy < 1) throw std::domain_error("padic_log: not a 1-unit");
    PadicNumber sum = PadicNumber::zero(p, A);
    PadicNumber yn = y;
    for (long n = 1;; ++n) {
        int vn = iwr::valuation(Integer(n), p);
        // every later term has valuation >= A once n*vy - log_p(n) >= A
        long lp = 0;
        for (long t = n; t >= p; t /= p) ++lp;
        if (n * vy - lp >= A) break;
        PadicNumber term = yn / PadicNumber::from_int(n, p, A + vn);
        sum = (n % 2 == 1) ? sum + term : sum - term;
        yn = yn * y;
    }
    return sum;
}

}  // namespace iwr
