#pragma once

#include "iwr/cyclotomic.hpp"
#include "iwr/dirichlet.hpp"
#include "iwr/iwasawa.hpp"
#include "iwr/modsym.hpp"
#include "iwr/qseries.hpp"

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

struct MttMultiplier {
    PadicNumber first;   // 1 - phi0(p) eta(p) p^(k-2-j) / u
    PadicNumber second;  // 1 - conj(phi0)(p) p^j / u
    PadicNumber value() const { return first * second; }
};

// e_p(u, x^j phi). eta_p and phi0_p are the embedded character values at p
// (zero when ramified); phi0bar_p is the value of the conjugate character.
inline MttMultiplier mtt_multiplier(const PadicNumber& u, const PadicNumber& eta_p, const PadicNumber& phi0_p,
                                    const PadicNumber& phi0bar_p, int k, int j, std::int64_t p) {
    if (!u.is_unit()) throw std::domain_error("mtt_multiplier: u must be a p-adic unit");
    int M = u.absolute_precision();
    PadicNumber one = PadicNumber::from_int(1, p, M);
    PadicNumber pp = PadicNumber::from_int(p, p, M);
    MttMultiplier m;
    m.first = one - phi0_p * eta_p * pp.pow(k - 2 - j) / u;
    m.second = one - phi0bar_p * pp.pow(j) / u;
    return m;
}

// Weight-2 form with its +/- symbols at a prime p. The symbols evaluate {r, inf}.
struct BranchForm {
    std::string label;
    std::string twist = "triv1";
    ModularSymbol plus, minus;
    std::int64_t level = 1;
    std::int64_t p = 3;
    Integer ap = 0;
    PadicNumber alpha;
    bool multiplicative = false;

    const ModularSymbol& symbol(int sgn) const { return sgn > 0 ? plus : minus; }
};

// alpha = a_p when p || N, otherwise the unit root of X^2 - a_p X + p.
inline BranchForm make_branch_form(std::string label, const ModularSymbol& plus, const ModularSymbol& minus,
                                   std::int64_t level, std::int64_t p, const Integer& ap, int M,
                                   std::string twist = "triv1") {
    require_odd_prime(p);
    if (level % (p * p) == 0) throw std::invalid_argument("make_branch_form: additive reduction at p");
    BranchForm f;
    f.label = std::move(label);
    f.twist = std::move(twist);
    f.plus = plus;
    f.minus = minus;
    f.level = level;
    f.p = p;
    f.ap = ap;
    f.multiplicative = level % p == 0;
    PadicNumber A = PadicNumber::from_rational(Rational(ap), p, M);
    if (!A.is_unit()) throw std::domain_error("make_branch_form: a_p is not a unit");
    f.alpha = f.multiplicative ? A : unit_root(A, PadicNumber::from_int(p, p, M));
    return f;
}

inline int branch_sign(std::int64_t j) { return j % 2 == 0 ? 1 : -1; }

struct BranchValue {
    std::int64_t j = 0;
    int sign = 1;
    // j != 0: sum_b conj(omega)^j(b) x^sgn(b/p) in Q(zeta_{p-1}); j = 0: x^+(0).
    CyclotomicNumber exact;
    PadicNumber multiplier;  // 1/(2 alpha), or e_p for j = 0
    PadicNumber value;
    bool exact_zero() const { return exact.is_zero(); }
    int valuation() const { return value.is_zero() ? kInfiniteValuation : value.valuation(); }
};

inline PadicNumber euler_multiplier_trivial(const BranchForm& f) {
    std::int64_t p = f.p;
    int M = f.alpha.absolute_precision();
    PadicNumber e = PadicNumber::from_int(1, p, M) - f.alpha.inverse();
    return f.multiplicative ? e : e * e;
}

inline BranchValue branch_value_trivial(const BranchForm& f, std::int64_t j, int M) {
    std::int64_t p = f.p;
    j = mod(j, p - 1);
    BranchValue out;
    out.j = j;
    out.sign = branch_sign(j);
    if (j == 0) {
        out.exact = CyclotomicNumber::rational(f.plus(Rational(0)), p - 1);
        out.multiplier = euler_multiplier_trivial(f);
    } else {
        DirichletCharacter wbar = teichmuller_character(p, -j);
        const ModularSymbol& x = f.symbol(out.sign);
        CyclotomicNumber s(p - 1);
        for (std::int64_t b = 1; b < p; ++b) {
            Rational v = x(Rational(b, p));
            if (v != 0) s = s + wbar.value(b).lift(p - 1) * v;
        }
        out.exact = s;
        out.multiplier = (PadicNumber::from_int(2, p, M) * f.alpha).inverse();
    }
    out.value = embed_cyclotomic(out.exact, make_embedding(p - 1, p, M)) * out.multiplier;
    return out;
}

struct Sigma0Factor {
    std::int64_t ell = 0;
    EulerPoly<PadicNumber> poly;
    std::string description;
};

struct BranchSeries {
    PadicSeries series;
    std::int64_t j = 0;
    std::string form;
    std::string twist;
    PadicNumber alpha;
    int level_n = 1;
    std::vector<Sigma0Factor> sigma0;
    std::string conventions =
        "gamma -> 1+p; T=0 value is 1/(2 alpha) sum for j != 0 and e_p x^+(0)/2 for j = 0; "
        "l^(-j-1) is the full p-adic number";
};

// Discrete log of <a> to base 1 + p modulo p^(n+1), in [0, p^n).
class DiamondLogTable {
public:
    DiamondLogTable(std::int64_t p, int n) : p_(p), mod_(ipow(p, static_cast<unsigned long>(n + 1)).get_si()) {
        std::int64_t pn = mod_ / p, x = 1;
        for (std::int64_t c = 0; c < pn; ++c) {
            log_[x] = c;
            x = static_cast<std::int64_t>((static_cast<__int128>(x) * (p + 1)) % mod_);
        }
        n_ = n;
    }

    std::int64_t operator()(std::int64_t a) const {
        Integer w = teichmuller_lift(a, p_, n_ + 1).residue(n_ + 1);
        std::int64_t d = mod(a * invmod(w.get_si(), mod_), mod_);
        auto it = log_.find(d);
        if (it == log_.end()) throw std::logic_error("DiamondLogTable: not a principal unit");
        return it->second;
    }

private:
    std::int64_t p_, mod_;
    int n_ = 1;
    std::map<std::int64_t, std::int64_t> log_;
};

// Riemann sum of the measure mu_n against conj(omega)^j (1+T)^c_a, with
// mu_n(a) = alpha^-(n+1) x(a/p^(n+1)) - eps alpha^-(n+2) x(a/p^n), x = x^sgn / 2,
// eps = 0 when p | N.
inline BranchSeries branch_series(const BranchForm& f, std::int64_t j, int n, const IwasawaContext& ctx) {
    std::int64_t p = f.p;
    if (n < 1) throw std::invalid_argument("branch_series: level n must be at least 1");
    if (ctx.p != p) throw std::invalid_argument("branch_series: context prime mismatch");
    j = mod(j, p - 1);
    int sgn = branch_sign(j);
    const ModularSymbol& x = f.symbol(sgn);
    int W = ctx.M + 2;
    PadicNumber ainv = f.alpha.inverse();
    PadicNumber c1 = ainv.pow(n + 1) / PadicNumber::from_int(2, p, W);
    PadicNumber c2 = f.multiplicative ? PadicNumber::zero(p, W) : ainv.pow(n + 2) / PadicNumber::from_int(2, p, W);
    std::int64_t big = ipow(p, static_cast<unsigned long>(n + 1)).get_si(), small = big / p;
    DiamondLogTable logs(p, n);
    std::vector<PadicNumber> bucket(static_cast<std::size_t>(small), PadicNumber::zero(p, W));
    for (std::int64_t a = 1; a < big; ++a) {
        if (a % p == 0) continue;
        Rational v1 = x(Rational(a, big));
        Rational v2 = f.multiplicative ? Rational(0) : x(Rational(a % small, small));
        PadicNumber m = PadicNumber::zero(p, W);
        if (v1 != 0) m = m + c1 * PadicNumber::from_rational(v1, p, W);
        if (v2 != 0) m = m - c2 * PadicNumber::from_rational(v2, p, W);
        if (m.is_zero()) continue;
        PadicNumber w = teichmuller_lift(a, p, W).pow(-j);
        auto& b = bucket[static_cast<std::size_t>(logs(a))];
        b = b + w * m;
    }
    // sum_c bucket[c] (1+T)^c
    std::vector<Integer> coeff(static_cast<std::size_t>(ctx.D), 0);
    for (std::int64_t c = 0; c < small; ++c) {
        const auto& b = bucket[static_cast<std::size_t>(c)];
        if (b.is_zero()) continue;
        Integer r = PadicSeries::integral_residue(b, ctx);
        for (std::int64_t i = 0; i <= c && i < ctx.D; ++i) coeff[static_cast<std::size_t>(i)] += r * binomial(c, i);
    }
    BranchSeries out;
    out.series = PadicSeries::from_coefficients(ctx, coeff);
    out.j = j;
    out.form = f.label;
    out.twist = f.twist;
    out.alpha = f.alpha;
    out.level_n = n;
    return out;
}

// P_l(X) for the weight-2 companion at l != p, twisted by xi:
// 1 - a_l xi(l) X + xi(l)^2 l X^2 (l not dividing N), 1 - a_l xi(l) X (l || N), 1 (l^2 | N).
inline Sigma0Factor sigma0_factor(std::int64_t ell, const Integer& a_ell, std::int64_t level, const PadicNumber& xi_ell,
                                  std::int64_t p, int M) {
    Sigma0Factor s;
    s.ell = ell;
    PadicNumber one = PadicNumber::from_int(1, p, M);
    PadicNumber a = PadicNumber::from_rational(Rational(a_ell), p, M);
    std::ostringstream d;
    if (level % (ell * ell) == 0) {
        s.poly.c = {one};
        d << "1";
    } else if (level % ell == 0) {
        s.poly.c = {one, -(a * xi_ell)};
        d << "1 - " << a_ell.get_str() << "*xi(" << ell << ")X";
    } else {
        s.poly.c = {one, -(a * xi_ell), xi_ell * xi_ell * PadicNumber::from_int(ell, p, M)};
        d << "1 - " << a_ell.get_str() << "*xi(" << ell << ")X + xi(" << ell << ")^2*" << ell << "X^2";
    }
    s.poly.ell = ell;
    s.description = d.str();
    return s;
}

// Multiplies in P_l(l^(-j-1) gamma) for each factor; j is the Euler-factor index.
inline BranchSeries apply_sigma0(const BranchSeries& bs, const std::vector<Sigma0Factor>& factors, std::int64_t j,
                                 const IwasawaContext& ctx) {
    BranchSeries out = bs;
    std::set<std::int64_t> seen;
    for (auto& f : bs.sigma0) seen.insert(f.ell);
    for (auto& f : factors) {
        if (f.ell == ctx.p) throw std::invalid_argument("apply_sigma0: l = p");
        if (!seen.insert(f.ell).second)
            throw std::invalid_argument("apply_sigma0: factor at " + std::to_string(f.ell) + " already applied");
        out.series = out.series * euler_factor_series(f.poly, f.ell, j, ctx);
        out.sigma0.push_back(f);
    }
    return out;
}

struct Verdict {
    IdealClass product;
    bool unit = false;
    int lambda_total = 0;
    IdealClass first, second;
};

// Ideal class mod pi of bs1 * bs2; a positive mu on either side is reported as class 0.
inline Verdict product_congruence_verdict(const BranchSeries& bs1, const BranchSeries& bs2) {
    Verdict v;
    v.first = ideal_mod_pi(bs1.series);
    v.second = ideal_mod_pi(bs2.series);
    v.product = ideal_mod_pi(bs1.series * bs2.series);
    v.unit = v.product.is_unit();
    v.lambda_total = v.product.zero ? -1 : v.product.lambda;
    return v;
}

}  // namespace iwr
