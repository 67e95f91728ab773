#pragma once

#include "iwr/numtheory.hpp"
#include "iwr/padic.hpp"
#include "iwr/qseries.hpp"

#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

// gamma acts through u = 1 + p.
struct IwasawaContext {
    std::int64_t p = 3;
    int M = 8;  // coefficients mod p^M
    int D = 3;  // series mod T^D

    static IwasawaContext make(std::int64_t p, int M = 8, int D = 0) {
        require_odd_prime(p);
        if (M < 1) throw std::invalid_argument("IwasawaContext: M must be positive");
        IwasawaContext c;
        c.p = p;
        c.M = M;
        c.D = D > 0 ? D : static_cast<int>(p);
        return c;
    }

    Integer u() const { return Integer(static_cast<long>(p + 1)); }
    Integer modulus() const { return ipow(p, static_cast<unsigned long>(M)); }

    friend bool operator==(const IwasawaContext& a, const IwasawaContext& b) {
        return a.p == b.p && a.M == b.M && a.D == b.D;
    }
};

// Element of Z_p[[T]] modulo (p^M, T^D).
class PadicSeries {
public:
    PadicSeries() = default;
    explicit PadicSeries(const IwasawaContext& ctx) : ctx_(ctx), c_(static_cast<std::size_t>(ctx.D), 0) {}

    static PadicSeries constant(const IwasawaContext& ctx, const Integer& a) {
        PadicSeries s(ctx);
        s.c_[0] = mod(a, ctx.modulus());
        return s;
    }

    static PadicSeries from_padic_constant(const IwasawaContext& ctx, const PadicNumber& a) {
        return constant(ctx, integral_residue(a, ctx));
    }

    // T^k
    static PadicSeries monomial(const IwasawaContext& ctx, int k, const Integer& a = 1) {
        PadicSeries s(ctx);
        if (k < ctx.D) s.c_[static_cast<std::size_t>(k)] = mod(a, ctx.modulus());
        return s;
    }

    static PadicSeries from_coefficients(const IwasawaContext& ctx, const std::vector<Integer>& c) {
        PadicSeries s(ctx);
        for (std::size_t i = 0; i < c.size() && i < s.c_.size(); ++i) s.c_[i] = mod(c[i], ctx.modulus());
        return s;
    }

    const IwasawaContext& context() const { return ctx_; }
    std::int64_t prime() const { return ctx_.p; }
    int coeff_precision() const { return ctx_.M; }
    int degree_precision() const { return ctx_.D; }
    const std::vector<Integer>& coefficients() const { return c_; }

    Integer coeff(int i) const { return i < ctx_.D ? c_[static_cast<std::size_t>(i)] : Integer(0); }

    PadicNumber coefficient(int i) const {
        return PadicNumber::from_integer_mod(coeff(i), ctx_.p, ctx_.M);
    }

    bool is_zero() const {
        for (auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    friend PadicSeries operator+(const PadicSeries& a, const PadicSeries& b) {
        a.check(b);
        PadicSeries r(a.ctx_);
        Integer m = a.ctx_.modulus();
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = mod(a.c_[i] + b.c_[i], m);
        return r;
    }

    PadicSeries operator-() const {
        PadicSeries r(ctx_);
        Integer m = ctx_.modulus();
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = mod(-c_[i], m);
        return r;
    }

    friend PadicSeries operator-(const PadicSeries& a, const PadicSeries& b) { return a + (-b); }

    friend PadicSeries operator*(const PadicSeries& a, const PadicSeries& b) {
        a.check(b);
        PadicSeries r(a.ctx_);
        std::size_t D = r.c_.size();
        for (std::size_t i = 0; i < D; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; i + j < D; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        Integer m = a.ctx_.modulus();
        for (auto& x : r.c_) x = mod(x, m);
        return r;
    }

    PadicSeries scaled(const Integer& s) const {
        PadicSeries r(ctx_);
        Integer m = ctx_.modulus();
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod(c_[i] * s, m);
        return r;
    }

    // Value at T = t for v_p(t) >= 1, mod p^M (tail terms vanish once i >= M).
    PadicNumber evaluate(const PadicNumber& t) const {
        if (!t.is_zero() && t.valuation() < 1) throw std::domain_error("PadicSeries::evaluate: need v_p(T) >= 1");
        Integer tv = integral_residue(t, ctx_), m = ctx_.modulus(), acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = mod(acc * tv + c_[i], m);
        return PadicNumber::from_integer_mod(acc, ctx_.p, ctx_.M);
    }

    // Inverse of a unit series.
    PadicSeries inverse() const {
        if (mod(c_[0], Integer(static_cast<long>(ctx_.p))) == 0)
            throw std::domain_error("PadicSeries::inverse: constant term is not a unit");
        Integer m = ctx_.modulus(), inv0;
        mpz_invert(inv0.get_mpz_t(), c_[0].get_mpz_t(), m.get_mpz_t());
        PadicSeries r(ctx_);
        r.c_[0] = inv0;
        for (std::size_t n = 1; n < c_.size(); ++n) {
            Integer s = 0;
            for (std::size_t k = 1; k <= n; ++k) s += c_[k] * r.c_[n - k];
            r.c_[n] = mod(-s * inv0, m);
        }
        return r;
    }

    friend bool operator==(const PadicSeries& a, const PadicSeries& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

    // "p, M, D, [v:u, ...]"; zero coefficients render as "M:0".
    std::string serialize() const {
        std::ostringstream os;
        os << ctx_.p << ", " << ctx_.M << ", " << ctx_.D << ", [";
        for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << coefficient(static_cast<int>(i)).str();
        os << "]";
        return os.str();
    }

    static PadicSeries parse(const std::string& text) {
        static const std::regex head(R"(^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*\[(.*)\]\s*$)");
        std::smatch m;
        if (!std::regex_match(text, m, head)) throw std::invalid_argument("PadicSeries::parse: malformed series");
        IwasawaContext ctx = IwasawaContext::make(std::stoll(m[1]), std::stoi(m[2]), std::stoi(m[3]));
        PadicSeries s(ctx);
        std::string body = m[4];
        static const std::regex item(R"((-?\d+)\s*:\s*(\d+))");
        std::size_t i = 0;
        for (auto it = std::sregex_iterator(body.begin(), body.end(), item); it != std::sregex_iterator(); ++it, ++i) {
            if (i >= s.c_.size()) throw std::invalid_argument("PadicSeries::parse: too many coefficients");
            int v = std::stoi((*it)[1]);
            Integer u((*it)[2].str());
            if (u == 0) continue;
            if (v < 0) throw std::invalid_argument("PadicSeries::parse: negative valuation");
            s.c_[i] = mod(u * ipow(ctx.p, static_cast<unsigned long>(v)), ctx.modulus());
        }
        if (i != s.c_.size()) throw std::invalid_argument("PadicSeries::parse: coefficient count differs from D");
        return s;
    }

    static Integer integral_residue(const PadicNumber& a, const IwasawaContext& ctx) {
        if (a.is_zero()) {
            if (a.valuation() < ctx.M) throw std::domain_error("PadicSeries: constant known to fewer than M digits");
            return 0;
        }
        if (a.valuation() < 0) throw std::domain_error("PadicSeries: non-integral coefficient");
        if (a.absolute_precision() < ctx.M) throw std::domain_error("PadicSeries: coefficient precision below M");
        return a.residue(ctx.M);
    }

private:
    void check(const PadicSeries& o) const {
        if (!(ctx_ == o.ctx_)) throw std::invalid_argument("PadicSeries: context mismatch");
    }

    IwasawaContext ctx_;
    std::vector<Integer> c_;
};

inline PadicSeries series_mul(const PadicSeries& a, const PadicSeries& b) { return a * b; }

struct WeierstrassData {
    int mu = 0;
    int lambda = 0;
    std::vector<Integer> distinguished;  // monic, degree lambda, low to high, mod p^dist_precision
    int dist_precision = 0;
    PadicNumber unit_head;  // c_lambda / p^mu
};

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Weierstrass preparation f = p^mu P(T) U(T).
inline WeierstrassData invariants(const PadicSeries& f) {
    const auto& ctx = f.context();
    std::int64_t p = ctx.p;
    int D = ctx.D;
    WeierstrassData w;
    w.mu = kInfiniteValuation;
    for (int i = 0; i < D; ++i) {
        Integer c = f.coeff(i);
        if (c == 0) continue;
        int v = valuation(c, p);
        if (v < w.mu) {
            w.mu = v;
            w.lambda = i;
        }
    }
    if (w.mu == kInfiniteValuation) throw PrecisionError("invariants: series is zero to precision");
    if (w.lambda >= D) throw PrecisionError("invariants: lambda exceeds degree precision");
    int prec = ctx.M - w.mu;
    Integer pm = ipow(p, static_cast<unsigned long>(prec));
    Integer pmu = ipow(p, static_cast<unsigned long>(w.mu));
    w.unit_head = PadicNumber::from_integer_mod(f.coeff(w.lambda) / pmu, p, prec);

    int lam = w.lambda;
    if (lam == 0) {
        w.distinguished = {1};
        w.dist_precision = prec;
        return w;
    }
    // g = f / p^mu = B + T^lam C, C a unit.
    IwasawaContext rc = ctx;
    rc.M = prec;
    std::vector<Integer> g(static_cast<std::size_t>(D));
    for (int i = 0; i < D; ++i) g[static_cast<std::size_t>(i)] = mod(f.coeff(i) / pmu, pm);
    std::vector<Integer> B(g.begin(), g.begin() + lam), C(g.begin() + lam, g.end());
    PadicSeries Bs = PadicSeries::from_coefficients(rc, B);
    PadicSeries Cinv = PadicSeries::from_coefficients(rc, C).inverse();
    PadicSeries BCi = Bs * Cinv;
    // h = sum_k (-S)^k(1), S(x) = tau(x * B C^-1), tau dropping the first lam terms
    auto S = [&](const PadicSeries& x) {
        PadicSeries y = x * BCi;
        std::vector<Integer> sh;
        for (int i = lam; i < D; ++i) sh.push_back(y.coeff(i));
        return PadicSeries::from_coefficients(rc, sh);
    };
    int K = D >= 2 * lam ? (D - 2 * lam) / lam : 0;
    PadicSeries h = PadicSeries::constant(rc, 1), term = h;
    for (int k = 1; k <= std::max(K, prec); ++k) {
        term = -S(term);
        if (term.is_zero()) break;
        h = h + term;
    }
    PadicSeries q = h * Cinv;
    PadicSeries P = q * PadicSeries::from_coefficients(rc, g);
    w.distinguished.assign(static_cast<std::size_t>(lam) + 1, 0);
    for (int i = 0; i < lam; ++i) w.distinguished[static_cast<std::size_t>(i)] = P.coeff(i);
    w.distinguished[static_cast<std::size_t>(lam)] = 1;
    w.dist_precision = std::min(prec, K + 1);
    return w;
}

// Reduction of the ideal (f) in F_p[[T]].
struct IdealClass {
    bool zero = false;
    int lambda = 0;

    bool is_unit() const { return !zero && lambda == 0; }
    std::string str() const { return zero ? "0" : "T^" + std::to_string(lambda); }
    friend bool operator==(const IdealClass& a, const IdealClass& b) {
        return a.zero == b.zero && (a.zero || a.lambda == b.lambda);
    }
};

inline IdealClass ideal_mod_pi(const PadicSeries& f) {
    auto w = invariants(f);
    IdealClass c;
    if (w.mu > 0) c.zero = true;
    else c.lambda = w.lambda;
    return c;
}

// <a> = a / omega(a) and its exponent log<a>/log u, to M digits.
inline PadicNumber diamond(std::int64_t a, std::int64_t p, int M) {
    return PadicNumber::from_int(a, p, M) / teichmuller_lift(a, p, M);
}

inline PadicNumber log_exponent(std::int64_t a, std::int64_t p, int M) {
    PadicNumber la = padic_log(diamond(a, p, M + 1));
    PadicNumber lu = padic_log(PadicNumber::from_int(p + 1, p, M + 1));
    return la / lu;
}

// (1 + T)^s = sum binom(s, i) T^i for s in Z_p.
inline PadicSeries binomial_series(const PadicNumber& s, const IwasawaContext& ctx) {
    std::int64_t p = ctx.p;
    PadicSeries r(ctx);
    std::vector<Integer> c(static_cast<std::size_t>(ctx.D));
    PadicNumber acc = PadicNumber::from_int(1, p, s.absolute_precision());
    for (int i = 0; i < ctx.D; ++i) {
        if (i > 0) acc = acc * (s - PadicNumber::from_int(i - 1, p, s.absolute_precision())) /
                         PadicNumber::from_int(i, p, s.absolute_precision());
        c[static_cast<std::size_t>(i)] = PadicSeries::integral_residue(acc, ctx);
    }
    return PadicSeries::from_coefficients(ctx, c);
}

// Digits lost to i! in binom(s, i), i < D.
inline int factorial_loss(std::int64_t p, int D) {
    int e = 0;
    for (std::int64_t q = p; q < D; q *= p) e += static_cast<int>((D - 1) / q);
    return e;
}

// P(l^(-j-1) (1+T)^c_l) with X -> l^(-j-1) taken as the full p-adic number
// (the Teichmueller part of l sits in the constant).
inline PadicSeries euler_factor_series(const EulerPoly<PadicNumber>& P, std::int64_t ell, std::int64_t j,
                                       const IwasawaContext& ctx) {
    std::int64_t p = ctx.p;
    if (ell == p) throw std::invalid_argument("euler_factor_series: l = p");
    if (P.c.empty()) throw std::invalid_argument("euler_factor_series: empty polynomial");
    int W = ctx.M + factorial_loss(p, ctx.D) + 2;
    PadicNumber c = log_exponent(ell, p, W);
    PadicNumber x = PadicNumber::from_int(ell, p, W).pow(-(j + 1));
    PadicSeries one = PadicSeries::constant(ctx, 1);
    PadicSeries gamma = binomial_series(c, ctx);
    PadicSeries X = gamma.scaled(PadicSeries::integral_residue(x, ctx));
    PadicSeries out = PadicSeries::from_padic_constant(ctx, P.c[0]);
    PadicSeries Xk = one;
    for (std::size_t k = 1; k < P.c.size(); ++k) {
        Xk = Xk * X;
        out = out + Xk.scaled(PadicSeries::integral_residue(P.c[k], ctx));
    }
    return out;
}

}  // namespace iwr
