#pragma once

#include "iwr/numtheory.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

// Dense rational matrix, row-major.
struct RationalMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> a;

    RationalMatrix() = default;
    RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Rational(0)) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    Rational& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    RationalMatrix transpose() const {
        RationalMatrix t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
        if (x.cols != y.rows) throw std::invalid_argument("matrix product: shape mismatch");
        RationalMatrix z(x.rows, y.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t k = 0; k < x.cols; ++k) {
                const Rational& v = x(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
            }
        return z;
    }

    friend RationalMatrix operator-(const RationalMatrix& x, const RationalMatrix& y) {
        RationalMatrix z = x;
        for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
        return z;
    }

    friend bool operator==(const RationalMatrix& x, const RationalMatrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    Rational trace() const {
        Rational t = 0;
        for (std::size_t i = 0; i < std::min(rows, cols); ++i) t += (*this)(i, i);
        return t;
    }

    // Stack below.
    void append_rows(const RationalMatrix& o) {
        if (rows == 0 && cols == 0) cols = o.cols;
        if (o.cols != cols) throw std::invalid_argument("append_rows: column mismatch");
        a.insert(a.end(), o.a.begin(), o.a.end());
        rows += o.rows;
    }
};

// In-place reduced row echelon form with left-to-right pivots; returns pivot columns.
inline std::vector<std::size_t> rref(RationalMatrix& m) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m(p, c) == 0) ++p;
        if (p == m.rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols; ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols; ++j)
                if (m(r, j) != 0) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

inline std::size_t rank(RationalMatrix m) { return rref(m).size(); }

// Basis of {x : m x = 0}, one vector per free column (free entry 1).
inline std::vector<std::vector<Rational>> kernel(RationalMatrix m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<Rational>> out;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rational> v(m.cols, Rational(0));
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
        out.push_back(std::move(v));
    }
    return out;
}

// Scale a nonzero rational vector to coprime integers, first nonzero entry positive.
// Returns the applied factor.
inline Rational primitive_scaling(const std::vector<Rational>& v) {
    Integer den = 1, g = 0;
    for (auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    for (auto& x : v) {
        Integer n = x.get_num() * (den / x.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    }
    if (g == 0) throw std::domain_error("primitive_scaling: zero vector");
    Rational s(den, g);
    s.canonicalize();
    for (auto& x : v)
        if (x != 0) {
            if (x < 0) s = -s;
            break;
        }
    return s;
}

}  // namespace iwr
