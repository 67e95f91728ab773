#pragma once

#include "iwr/numtheory.hpp"
#include "iwr/padic.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

// Element of Q[x]/(f) for a monic integer f, power basis.
class NumberFieldElement {
public:
    NumberFieldElement() : poly_{0, 1}, c_{0} {}

    NumberFieldElement(IntPoly f, std::vector<Rational> c) : poly_(std::move(f)), c_(std::move(c)) {
        if (poly_.size() < 2 || poly_.back() != 1) throw std::invalid_argument("number field: polynomial must be monic");
        c_.resize(degree(), Rational(0));
        reduce();
    }

    static NumberFieldElement rational(const IntPoly& f, const Rational& q) { return {f, {q}}; }

    std::size_t degree() const { return poly_.size() - 1; }
    const IntPoly& polynomial() const { return poly_; }
    const std::vector<Rational>& coefficients() const { return c_; }

    bool is_zero() const {
        for (auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    friend NumberFieldElement operator+(const NumberFieldElement& a, const NumberFieldElement& b) {
        a.check(b);
        NumberFieldElement r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }

    NumberFieldElement operator-() const {
        NumberFieldElement r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend NumberFieldElement operator-(const NumberFieldElement& a, const NumberFieldElement& b) { return a + (-b); }

    friend NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b) {
        a.check(b);
        std::vector<Rational> prod(2 * a.degree() - 1, Rational(0));
        for (std::size_t i = 0; i < a.degree(); ++i)
            for (std::size_t j = 0; j < b.degree(); ++j) prod[i + j] += a.c_[i] * b.c_[j];
        NumberFieldElement r;
        r.poly_ = a.poly_;
        r.c_ = std::move(prod);
        r.reduce();
        return r;
    }

    friend NumberFieldElement operator*(const NumberFieldElement& a, const Rational& q) {
        NumberFieldElement r = a;
        for (auto& x : r.c_) x *= q;
        return r;
    }

    friend bool operator==(const NumberFieldElement& a, const NumberFieldElement& b) {
        return a.poly_ == b.poly_ && a.c_ == b.c_;
    }

    // Image in Z_p under x -> root.
    PadicNumber embed(const PadicNumber& root) const {
        std::int64_t p = root.prime();
        int M = root.absolute_precision();
        PadicNumber acc = PadicNumber::zero(p, M), rk = PadicNumber::from_int(1, p, M);
        for (auto& x : c_) {
            if (x != 0) acc = acc + PadicNumber::from_rational(x, p, M) * rk;
            rk = rk * root;
        }
        return acc;
    }

    // Reduction modulo the degree-1 prime (p, x - seed).
    std::int64_t reduce_mod(std::int64_t p, std::int64_t seed) const {
        Integer P(static_cast<long>(p)), r = 0, s(static_cast<long>(mod(seed, p))), pw = 1;
        for (auto& x : c_) {
            if (x != 0) r += rational_mod(x, P) * pw;
            pw = mod(pw * s, P);
        }
        return mod(r, P).get_si();
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].get_str();
        os << "]";
        return os.str();
    }

private:
    void check(const NumberFieldElement& o) const {
        if (poly_ != o.poly_) throw std::invalid_argument("number field: mismatched fields");
    }

    void reduce() {
        std::size_t d = degree();
        for (std::size_t i = c_.size(); i-- > d;) {
            Rational c = c_[i];
            if (c == 0) continue;
            for (std::size_t j = 0; j < d; ++j) c_[i - d + j] -= c * Rational(poly_[j]);
            c_[i] = 0;
        }
        c_.resize(d);
    }

    IntPoly poly_;
    std::vector<Rational> c_;
};

}  // namespace iwr
