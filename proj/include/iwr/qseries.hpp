#pragma once

#include "iwr/cyclotomic.hpp"
#include "iwr/dirichlet.hpp"
#include "iwr/numberfield.hpp"
#include "iwr/numtheory.hpp"
#include "iwr/padic.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

// Raised for malformed or inconsistent newform files.
struct IngestionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class C>
struct QExpansion {
    int weight = 2;
    std::int64_t level = 1;
    DirichletCharacter nebentypus;
    std::string coeff_ring = "rational";
    std::vector<C> a;  // a[0..n_max]

    std::int64_t n_max() const { return static_cast<std::int64_t>(a.size()) - 1; }
    const C& operator[](std::int64_t n) const { return a.at(static_cast<std::size_t>(n)); }
};

using EisensteinSeries = QExpansion<CyclotomicNumber>;

// ---- coefficient helpers -------------------------------------------------

inline std::string coeff_str(const CyclotomicNumber& c) { return c.str(); }
inline std::string coeff_str(const NumberFieldElement& c) { return c.str(); }
inline std::string coeff_str(const PadicNumber& c) { return c.str(); }
inline std::string coeff_str(const Rational& c) { return c.get_str(); }

// chi(n) * c. Non-cyclotomic rings accept only real characters.
inline CyclotomicNumber char_scale(const CyclotomicNumber& c, const DirichletCharacter& chi, std::int64_t n) {
    if (chi.modulus() > 1 && chi.is_zero_at(n)) return CyclotomicNumber(c.order());
    return c * chi.value(n);
}

template <class C>
C char_scale(const C& c, const DirichletCharacter& chi, std::int64_t n) {
    int s = chi.modulus() == 1 ? 1 : chi.sign_value(n);
    if (s == 1) return c;
    if (s == -1) return c * Rational(-1);
    return c * Rational(0);
}

inline PadicNumber char_scale(const PadicNumber& c, const DirichletCharacter& chi, std::int64_t n) {
    int s = chi.modulus() == 1 ? 1 : chi.sign_value(n);
    if (s == 1) return c;
    if (s == -1) return -c;
    return PadicNumber::zero(c.prime(), c.absolute_precision());
}

// Export as "n:coeff" lines.
template <class C>
std::string export_qexpansion(const QExpansion<C>& g) {
    std::ostringstream os;
    for (std::int64_t n = 0; n <= g.n_max(); ++n) os << n << ":" << coeff_str(g[n]) << "\n";
    return os.str();
}

// ---- Bernoulli numbers and L-values at non-positive integers -------------

// B_0..B_n with B_1 = -1/2.
inline std::vector<Rational> bernoulli_numbers(int n) {
    std::vector<Rational> B(static_cast<std::size_t>(n) + 1);
    B[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational s = 0;
        for (int k = 0; k < m; ++k) s += Rational(binomial(m + 1, k)) * B[static_cast<std::size_t>(k)];
        B[static_cast<std::size_t>(m)] = -s / Rational(m + 1);
    }
    return B;
}

// B_l(x) = sum_k binom(l, k) B_k x^(l-k).
inline Rational bernoulli_polynomial(int l, const Rational& x) {
    auto B = bernoulli_numbers(l);
    Rational r = 0, xp = 1;
    for (int k = l; k >= 0; --k) {
        r += Rational(binomial(l, k)) * B[static_cast<std::size_t>(k)] * xp;
        xp *= x;
    }
    return r;
}

// Generalized Bernoulli number over the modulus F of theta (imprimitive allowed).
inline CyclotomicNumber generalized_bernoulli(const DirichletCharacter& theta, int l) {
    std::int64_t F = theta.modulus();
    CyclotomicNumber s(theta.value_order());
    for (std::int64_t a = 1; a <= F; ++a) {
        if (F > 1 && theta.is_zero_at(a)) continue;
        Rational b = bernoulli_polynomial(l, Rational(Integer(static_cast<long>(a)), Integer(static_cast<long>(F))));
        s = s + (F == 1 ? CyclotomicNumber::rational(b, theta.value_order()) : theta.value(a) * b);
    }
    return s * Rational(ipow(F, static_cast<unsigned long>(l - 1)));
}

// L(1 - l, theta) = -B_{l,theta} / l.
inline CyclotomicNumber l_value_nonpositive(const DirichletCharacter& theta, int l) {
    if (l < 1) throw std::invalid_argument("l_value_nonpositive: need l >= 1");
    return generalized_bernoulli(theta, l) * Rational(-1, l);
}

// ---- Eisenstein series -----------------------------------------------------

// E_l(theta, phi): a(n) = sum_{d|n} theta(d) phi(n/d) d^(l-1), level = uv with
// u, v the moduli of theta and phi.
inline EisensteinSeries eisenstein_series(const DirichletCharacter& theta, const DirichletCharacter& phi, int l,
                                          std::int64_t n_max) {
    if (l < 1) throw std::invalid_argument("eisenstein_series: weight must be positive");
    if (theta.parity() * phi.parity() != (l % 2 == 0 ? 1 : -1))
        throw std::invalid_argument("eisenstein_series: parity condition theta*phi(-1) = (-1)^l fails");
    std::int64_t u = theta.modulus(), v = phi.modulus();
    if (l == 2 && u == 1 && v == 1)
        throw std::invalid_argument("eisenstein_series: weight 2 level 1 is not holomorphic; use mazur_e2");
    std::int64_t ord = lcm(theta.value_order(), phi.value_order());
    EisensteinSeries g;
    g.weight = l;
    g.level = u * v;
    g.nebentypus = (theta * phi).extend(u * v);
    g.coeff_ring = "cyclotomic(" + std::to_string(ord) + ")";
    g.a.assign(static_cast<std::size_t>(n_max) + 1, CyclotomicNumber(ord));

    CyclotomicNumber c0(ord);
    if (l == 1 && u == 1) c0 = c0 + l_value_nonpositive(phi, 1) * Rational(1, 2);
    if (v == 1) c0 = c0 + l_value_nonpositive(theta, l) * Rational(1, 2);
    g.a[0] = c0.lift(ord);

    // integer exponent tables over mu_ord avoid cyclotomic products in the loop
    auto T = theta.with_value_order(ord), P = phi.with_value_order(ord);
    std::vector<Integer> acc(static_cast<std::size_t>(ord));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        std::fill(acc.begin(), acc.end(), Integer(0));
        auto add = [&](std::int64_t d) {
            int i = u == 1 ? 0 : T.exponent(d), j = v == 1 ? 0 : P.exponent(n / d);
            if (i >= 0 && j >= 0) acc[static_cast<std::size_t>(mod(i + j, ord))] += ipow(d, static_cast<unsigned long>(l - 1));
        };
        for (std::int64_t d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            add(d);
            if (d * d != n) add(n / d);
        }
        g.a[static_cast<std::size_t>(n)] = CyclotomicNumber::from_exponent_vector(ord, acc);
    }
    return g;
}

inline Integer divisor_sum(std::int64_t n, int k = 1) {
    Integer s = 0;
    for (auto d : divisors(n)) s += ipow(d, static_cast<unsigned long>(k));
    return s;
}

// E2(z) - t E2(tz) with E2 = -1/24 + sum sigma(n) q^n.
inline EisensteinSeries mazur_e2(std::int64_t t, std::int64_t n_max) {
    if (t < 2) throw std::invalid_argument("mazur_e2: need t >= 2");
    EisensteinSeries g;
    g.weight = 2;
    g.level = t;
    g.nebentypus = DirichletCharacter::trivial(t);
    g.coeff_ring = "rational";
    g.a.assign(static_cast<std::size_t>(n_max) + 1, CyclotomicNumber(1));
    g.a[0] = CyclotomicNumber::rational(Rational(t - 1, 24));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        Integer s = divisor_sum(n);
        if (n % t == 0) s -= Integer(static_cast<long>(t)) * divisor_sum(n / t);
        g.a[static_cast<std::size_t>(n)] = CyclotomicNumber::rational(Rational(s));
    }
    return g;
}

// ---- twisting ----------------------------------------------------------------

// (g|chi)(z) = sum chi(n) a(n) q^n. Level becomes lcm(N, M) * M for chi mod M.
template <class C>
QExpansion<C> twist(const QExpansion<C>& g, const DirichletCharacter& chi) {
    QExpansion<C> r = g;
    std::int64_t M = chi.modulus();
    if (M == 1) return r;
    r.level = lcm(g.level, M) * M;
    r.nebentypus = (g.nebentypus * chi * chi).extend(r.level);
    for (std::int64_t n = 0; n <= g.n_max(); ++n) r.a[static_cast<std::size_t>(n)] = char_scale(g[n], chi, n);
    return r;
}

// g | iota_m: keeps a(n) with gcd(n, m) = 1.
template <class C>
QExpansion<C> deplete(const QExpansion<C>& g, std::int64_t m) {
    return twist(g, DirichletCharacter::trivial(m));
}

// ---- newform data -------------------------------------------------------------

struct NewformData {
    std::string label;
    std::int64_t level = 1;
    int weight = 2;
    DirichletCharacter nebentypus;
    IntPoly field_poly{0, 1};
    std::vector<NumberFieldElement> an;  // an[0] = 0, an[n] for n >= 1
    std::map<std::int64_t, std::int64_t> seed_root_mod_p;
    std::string provenance;

    std::int64_t n_max() const { return static_cast<std::int64_t>(an.size()) - 1; }
    const NumberFieldElement& a(std::int64_t n) const { return an.at(static_cast<std::size_t>(n)); }

    std::int64_t seed(std::int64_t p) const {
        if (field_poly.size() == 2) return mod(-field_poly[0], Integer(static_cast<long>(p))).get_si();
        auto it = seed_root_mod_p.find(p);
        if (it == seed_root_mod_p.end())
            throw IngestionError(label + ": no seed root recorded for p = " + std::to_string(p));
        return it->second;
    }

    QExpansion<NumberFieldElement> qexpansion() const {
        QExpansion<NumberFieldElement> q;
        q.weight = weight;
        q.level = level;
        q.nebentypus = nebentypus;
        std::ostringstream ring;
        ring << "number-field(";
        for (std::size_t i = 0; i < field_poly.size(); ++i) ring << (i ? "," : "") << field_poly[i].get_str();
        ring << ")";
        q.coeff_ring = ring.str();
        q.a = an;
        return q;
    }
};

// Multiplicativity and prime-power recursion on the stored range.
inline void validate_newform(const NewformData& f, std::int64_t limit = 200) {
    if (f.n_max() < 1) throw IngestionError(f.label + ": no coefficients");
    auto one = NumberFieldElement::rational(f.field_poly, 1);
    if (!(f.a(1) == one)) throw IngestionError(f.label + ": a(1) != 1");
    std::int64_t L = std::min(limit, f.n_max());
    for (std::int64_t m = 2; m <= L; ++m)
        for (std::int64_t n = 2; m * n <= L; ++n)
            if (gcd(m, n) == 1 && !(f.a(m * n) == f.a(m) * f.a(n)))
                throw IngestionError(f.label + ": coefficients not multiplicative at " + std::to_string(m * n));
    for (std::int64_t l = 2; l * l <= L; ++l) {
        if (!is_prime(l)) continue;
        for (std::int64_t q = l; q * l <= L; q *= l) {
            // a(l q) = a(l) a(q) - psi(l) l^(k-1) a(q / l)
            NumberFieldElement rhs = f.a(l) * f.a(q);
            if (f.level % l != 0) {
                if (!f.nebentypus.is_real()) break;
                int s = f.nebentypus.sign_value(l);
                rhs = rhs - f.a(q / l) * Rational(ipow(l, static_cast<unsigned long>(f.weight - 1)) * s);
            }
            if (!(f.a(l * q) == rhs))
                throw IngestionError(f.label + ": Hecke recursion fails at " + std::to_string(l * q));
        }
    }
}

inline NewformData parse_newform(const nlohmann::json& j) {
    NewformData f;
    try {
        f.label = j.at("label").get<std::string>();
        f.level = j.at("level").get<std::int64_t>();
        f.weight = j.at("weight").get<int>();
        f.nebentypus = parse_character(j.at("nebentypus").get<std::string>());
        f.field_poly.clear();
        for (auto& c : j.at("field_poly")) {
            if (c.is_string()) f.field_poly.emplace_back(c.get<std::string>());
            else f.field_poly.emplace_back(static_cast<long>(c.get<std::int64_t>()));
        }
        if (f.field_poly.size() < 2 || f.field_poly.back() != 1)
            throw IngestionError("field_poly must be monic of degree >= 1");
        f.an.push_back(NumberFieldElement::rational(f.field_poly, 0));
        for (auto& v : j.at("an")) {
            std::vector<Rational> c;
            for (auto& x : v) {
                if (x.is_string()) c.emplace_back(x.get<std::string>());
                else c.emplace_back(Integer(static_cast<long>(x.get<std::int64_t>())));
                c.back().canonicalize();
            }
            if (c.size() > f.field_poly.size() - 1) throw IngestionError("coefficient vector longer than the field degree");
            f.an.emplace_back(f.field_poly, c);
        }
        if (j.contains("seed_root_mod_p"))
            for (auto& [k, v] : j.at("seed_root_mod_p").items()) f.seed_root_mod_p[std::stoll(k)] = v.get<std::int64_t>();
        if (j.contains("provenance")) f.provenance = j.at("provenance").get<std::string>();
    } catch (const IngestionError&) {
        throw;
    } catch (const std::exception& e) {
        throw IngestionError(std::string("newform file: ") + e.what());
    }
    if (f.level < 1 || f.weight < 1) throw IngestionError(f.label + ": bad level or weight");
    if (f.level % f.nebentypus.modulus()) throw IngestionError(f.label + ": nebentypus modulus must divide the level");
    for (auto [p, s] : f.seed_root_mod_p) {
        Integer P(static_cast<long>(p));
        if (!is_prime(p) || eval_mod(f.field_poly, Integer(static_cast<long>(s)), P) != 0 ||
            eval_mod(derivative(f.field_poly), Integer(static_cast<long>(s)), P) == 0)
            throw IngestionError(f.label + ": seed " + std::to_string(s) + " is not a simple root mod " + std::to_string(p));
    }
    validate_newform(f);
    return f;
}

inline NewformData load_newform(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open newform file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IngestionError(path + ": " + e.what());
    }
    return parse_newform(j);
}

// ---- p-stabilization -------------------------------------------------------------

struct PStabilization {
    QExpansion<PadicNumber> f0;
    PadicNumber ap;    // image of a(p, f)
    PadicNumber u;     // unit root
    PadicNumber beta;  // non-unit root, as a p-adic number
    std::int64_t seed = 0;
};

// Value of a character at n embedded in Z_p (values must lie in mu_{p-1}).
inline PadicNumber embed_character_value(const DirichletCharacter& chi, std::int64_t n, std::int64_t p, int M) {
    if (chi.modulus() > 1 && chi.is_zero_at(n)) return PadicNumber::zero(p, M);
    auto c = chi.minimized();
    if (c.value_order() <= 2) return PadicNumber::from_int(chi.modulus() == 1 ? 1 : chi.sign_value(n), p, M);
    return embed_cyclotomic(c.value(n), make_embedding(c.value_order(), p, M));
}

// Unit root of X^2 - A X + c for a unit A and c divisible by p.
inline PadicNumber unit_root(const PadicNumber& A, const PadicNumber& c) {
    std::int64_t p = A.prime();
    if (!A.is_unit()) throw std::domain_error("unit_root: not ordinary");
    PadicNumber x = A;
    int M = A.absolute_precision();
    for (int i = 0; i < M + 2; ++i) {
        PadicNumber fx = x * x - A * x + c;
        if (fx.is_zero()) break;
        x = x - fx / (PadicNumber::from_int(2, p, M) * x - A);
    }
    return x;
}

inline PStabilization p_stabilize(const NewformData& f, std::int64_t p, int M) {
    require_odd_prime(p);
    if (f.level % p == 0) throw std::invalid_argument("p_stabilize: p divides the level");
    PStabilization s;
    s.seed = f.seed(p);
    PadicNumber root = hensel_root(f.field_poly, s.seed, p, M);
    s.ap = f.a(p).embed(root);
    if (!s.ap.is_unit()) throw std::domain_error("p_stabilize: form is not ordinary at the chosen prime");
    PadicNumber c = embed_character_value(f.nebentypus, p, p, M) *
                    PadicNumber::from_rational(Rational(ipow(p, static_cast<unsigned long>(f.weight - 1))), p, M);
    s.u = unit_root(s.ap, c);
    s.beta = s.ap - s.u;
    auto& g = s.f0;
    g.weight = f.weight;
    g.level = f.level * p;
    g.nebentypus = f.nebentypus.extend(g.level);
    g.coeff_ring = "padic(" + std::to_string(p) + ")";
    g.a.assign(static_cast<std::size_t>(f.n_max()) + 1, PadicNumber::zero(p, M));
    for (std::int64_t n = 1; n <= f.n_max(); ++n) {
        PadicNumber v = f.a(n).embed(root);
        if (n % p == 0) v = v - s.beta * f.a(n / p).embed(root);
        g.a[static_cast<std::size_t>(n)] = v;
    }
    return s;
}

// ---- Euler polynomials and root numbers ---------------------------------------

template <class C>
struct EulerPoly {
    std::int64_t ell = 0;
    std::vector<C> c;  // c[0] = 1, degree <= 2
    int degree() const { return static_cast<int>(c.size()) - 1; }
};

// 1 - a(p) T + psi(p) p^(l-1) T^2, or 1 - a(p) T when p | level.
inline EulerPoly<CyclotomicNumber> euler_poly_p(const EisensteinSeries& g, std::int64_t p) {
    if (g.n_max() < p) throw std::invalid_argument("euler_poly_p: a(p) not available");
    EulerPoly<CyclotomicNumber> P;
    P.ell = p;
    CyclotomicNumber one = CyclotomicNumber::rational(1);
    P.c = {one, -g[p]};
    if (g.level % p != 0) {
        CyclotomicNumber psi = g.nebentypus.modulus() == 1 ? one : g.nebentypus.value(p);
        P.c.push_back(psi * Rational(ipow(p, static_cast<unsigned long>(g.weight - 1))));
    }
    while (P.c.size() > 1 && P.c.back().is_zero()) P.c.pop_back();
    return P;
}

template <class C>
C evaluate_poly(const EulerPoly<C>& P, const C& x) {
    C r = P.c.back();
    for (std::size_t i = P.c.size() - 1; i-- > 0;) r = r * x + P.c[i];
    return r;
}

struct RootNumber {
    CyclotomicNumber value;
    bool sqrt_flagged = false;  // l odd and cond(theta)/cond(phi) not a rational square
    Rational radicand = 1;      // the unresolved square-root argument when flagged
};

// W = (cond theta / cond phi)^(l/2) phi(-1) G(phi) / G(conj theta), using
// 1/G(conj theta) = theta(-1) G(theta) / cond theta.
inline RootNumber eisenstein_root_number(const DirichletCharacter& theta, const DirichletCharacter& phi, int l) {
    if (theta.parity() * phi.parity() != (l % 2 == 0 ? 1 : -1))
        throw std::invalid_argument("eisenstein_root_number: parity condition fails");
    std::int64_t ct = theta.conductor(), cp = phi.conductor();
    Rational ratio(Integer(static_cast<long>(ct)), Integer(static_cast<long>(cp)));
    RootNumber W;
    Rational pw = 1;
    for (int i = 0; i < l / 2; ++i) pw *= ratio;
    if (l % 2 == 1) {
        Integer rn, rd;
        mpz_sqrt(rn.get_mpz_t(), ratio.get_num().get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), ratio.get_den().get_mpz_t());
        if (rn * rn == ratio.get_num() && rd * rd == ratio.get_den()) {
            pw *= Rational(rn, rd);
        } else {
            W.sqrt_flagged = true;
            W.radicand = ratio;
        }
    }
    W.value = gauss_sum(phi) * gauss_sum(theta) *
              (Rational(phi.parity() * theta.parity()) * pw / Rational(Integer(static_cast<long>(ct))));
    return W;
}

// ---- Sigma0, residual data and the Eisenstein partner ------------------------------

struct Sigma0 {
    std::vector<std::int64_t> primes;
    std::int64_t m = 1;
};

inline Sigma0 sigma0_and_m(std::int64_t I0, std::int64_t M0) {
    if (M0 < 1 || I0 < 1 || I0 % M0) throw std::invalid_argument("sigma0_and_m: need M0 | I0");
    std::set<std::int64_t> s;
    for (auto r : prime_divisors(I0)) {
        if ((I0 / M0) % r == 0 || M0 % (r * r) == 0) s.insert(r);
    }
    Sigma0 out;
    out.primes.assign(s.begin(), s.end());
    for (auto r : out.primes) out.m *= r;
    return out;
}

inline std::int64_t sturm_bound(int k, std::int64_t N) {
    Integer idx = static_cast<long>(N);
    for (auto l : prime_divisors(N)) idx = idx / l * (l + 1);
    Integer num = idx * k;
    Integer b = (num + 11) / 12;
    return b.get_si();
}

// Residual data of h at a degree-1 prime above p: rho_h mod p ~ xi1 + xi2.
struct ResidualData {
    std::int64_t p = 3;
    std::int64_t I0 = 1;  // prime-to-p conductor of rho_h
    std::int64_t M0 = 1;  // prime-to-p conductor of xi1 + xi2
    ResidualCharacter xi1, xi2;
};

inline std::int64_t prime_to_p(std::int64_t n, std::int64_t p) {
    while (n % p == 0) n /= p;
    return n;
}

// Finds xi2 mod I0 (unramified at p) with xi1 xi2 = psi omega^(l-1) and
// a(l, h) = xi1(l) + xi2(l) mod the prime for every prime l <= check_to.
inline std::optional<ResidualData> derive_residual_data(const NewformData& h, std::int64_t p,
                                                         std::int64_t check_to = 0) {
    require_odd_prime(p);
    std::int64_t seed = h.seed(p);
    std::int64_t I0 = prime_to_p(h.level, p);
    if (check_to <= 0) check_to = h.n_max();
    check_to = std::min(check_to, h.n_max());
    DirichletCharacter omega = teichmuller_character(p, 1);
    DirichletCharacter target = (h.nebentypus.with_value_order(lcm(h.nebentypus.value_order(), p - 1)) *
                                 omega.pow(h.weight - 1));
    if ((p - 1) % target.minimized().value_order() != 0) return std::nullopt;
    for (auto& x2 : characters_mod(I0, p - 1)) {
        DirichletCharacter x1 = target * x2.conj();
        auto r1 = ResidualCharacter::reduce(x1, p), r2 = ResidualCharacter::reduce(x2, p);
        bool ok = true;
        for (std::int64_t l = 2; l <= check_to && ok; ++l) {
            if (!is_prime(l) || l == p || h.level % l == 0 || x1.modulus() % l == 0) continue;
            std::int64_t lhs = h.a(l).reduce_mod(p, seed);
            ok = mod(lhs - r1.value_mod_p(l) - r2.value_mod_p(l), p) == 0;
        }
        if (!ok) continue;
        ResidualData d;
        d.p = p;
        d.I0 = I0;
        d.M0 = prime_to_p(x1.conductor(), p) * prime_to_p(x2.conductor(), p);
        d.xi1 = r1;
        d.xi2 = r2;
        return d;
    }
    return std::nullopt;
}

struct EisensteinPartner {
    DirichletCharacter xi1, xi2;
    DirichletCharacter theta;        // xi1 omega^(1-l), kept modulo lcm(cond xi1, p)
    DirichletCharacter alt_theta;    // lift of the residual xi1 omega^(1-l), minimized
    std::string lift_target = "xi1";
    EisensteinSeries g;
    Sigma0 sigma0;
};

inline EisensteinPartner residual_eisenstein_partner(const ResidualData& d, int l, std::int64_t n_max) {
    std::int64_t p = d.p;
    if (d.xi2.modulus % p == 0 && lift_residual_character(d.xi2, p).conductor() % p == 0)
        throw std::invalid_argument("residual_eisenstein_partner: xi2 must be unramified at p");
    EisensteinPartner out;
    out.xi1 = lift_residual_character(d.xi1, p);
    out.xi2 = lift_residual_character(d.xi2, p).primitive();
    DirichletCharacter w = teichmuller_character(p, 1 - l);
    DirichletCharacter xi1p = out.xi1.primitive();
    out.theta = (xi1p * w).minimized();
    out.theta = out.theta.extend(lcm(out.theta.modulus(), p));
    out.alt_theta = lift_residual_character(ResidualCharacter::reduce(xi1p * w, p), p).primitive();
    if (out.theta.parity() * out.xi2.parity() != (l % 2 == 0 ? 1 : -1))
        throw std::invalid_argument("residual_eisenstein_partner: parity xi1 xi2 omega^(1-l)(-1) = (-1)^l fails");
    out.g = eisenstein_series(out.theta, out.xi2, l, n_max);
    out.sigma0 = sigma0_and_m(d.I0, d.M0);
    return out;
}

// ---- congruences ----------------------------------------------------------------------

struct CongruenceIdealSpec {
    std::int64_t p = 3;
    std::int64_t seed = 0;  // root of the Hecke field polynomial mod p
    IntPoly field_poly{0, 1};

    static CongruenceIdealSpec rational(std::int64_t p) { return {p, 0, {0, 1}}; }

    void validate() const {
        require_prime(p);
        Integer P(static_cast<long>(p)), s(static_cast<long>(seed));
        if (eval_mod(field_poly, s, P) != 0 || eval_mod(derivative(field_poly), s, P) == 0)
            throw std::invalid_argument("congruence ideal: seed is not a simple root mod p");
    }
};

inline std::int64_t reduce_coeff(const NumberFieldElement& x, const CongruenceIdealSpec& I) {
    if (x.polynomial() != I.field_poly && x.degree() > 1)
        throw std::invalid_argument("reduce_coeff: coefficient field does not match the ideal");
    return x.reduce_mod(I.p, x.degree() > 1 ? I.seed : mod(-x.polynomial()[0], Integer(static_cast<long>(I.p))).get_si());
}

inline std::int64_t reduce_coeff(const CyclotomicNumber& x, const CongruenceIdealSpec& I) {
    Integer P(static_cast<long>(I.p));
    if (x.is_rational()) return mod(rational_mod(x.to_rational(), P), P).get_si();
    std::int64_t n = x.order();
    if ((I.p - 1) % n) throw std::invalid_argument("reduce_coeff: cyclotomic order does not divide p - 1");
    std::int64_t z = powmod(primitive_root(I.p), (I.p - 1) / n, I.p);
    Integer r = 0, pw = 1;
    for (std::size_t i = 0; i < x.degree(); ++i) {
        Rational c = x.coeff(i);
        if (c != 0) r += rational_mod(c, P) * pw;
        pw = mod(pw * z, P);
    }
    return mod(r, P).get_si();
}

inline std::int64_t reduce_coeff(const Rational& x, const CongruenceIdealSpec& I) {
    Integer P(static_cast<long>(I.p));
    return rational_mod(x, P).get_si();
}

struct CongruenceReport {
    std::int64_t bound = 0;
    std::int64_t compared = 0;
    std::vector<std::int64_t> mismatches;
    bool congruent() const { return mismatches.empty(); }
};

template <class C1, class C2>
CongruenceReport check_congruence(const QExpansion<C1>& g1, const QExpansion<C2>& g2, const CongruenceIdealSpec& I,
                                  std::int64_t bound) {
    I.validate();
    if (g1.n_max() < bound || g2.n_max() < bound)
        throw std::out_of_range("check_congruence: expansions shorter than the bound " + std::to_string(bound));
    CongruenceReport r;
    r.bound = bound;
    for (std::int64_t n = 0; n <= bound; ++n) {
        ++r.compared;
        if (reduce_coeff(g1[n], I) != reduce_coeff(g2[n], I)) r.mismatches.push_back(n);
    }
    return r;
}

}  // namespace iwr
