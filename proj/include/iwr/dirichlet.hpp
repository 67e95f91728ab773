#pragma once

#include "iwr/cyclotomic.hpp"
#include "iwr/numtheory.hpp"
#include "iwr/padic.hpp"

#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwr {

// Dirichlet character mod N with values in mu_n. exps[a] is the exponent k
// with chi(a) = zeta_n^k, or -1 when gcd(a, N) > 1.
class DirichletCharacter {
public:
    DirichletCharacter() : DirichletCharacter(trivial(1)) {}

    static DirichletCharacter trivial(std::int64_t N) {
        std::vector<int> e(static_cast<std::size_t>(N));
        for (std::int64_t a = 0; a < N; ++a) e[static_cast<std::size_t>(a)] = gcd(a, N) == 1 ? 0 : -1;
        if (N == 1) e[0] = 0;
        return DirichletCharacter(N, 1, std::move(e));
    }

    // Character determined by chi(g_i) = zeta_n^{e_i}; the g_i must generate
    // (Z/NZ)^x and the assignment must be consistent.
    static DirichletCharacter from_generators(std::int64_t N, std::int64_t n,
                                              const std::vector<std::pair<std::int64_t, std::int64_t>>& gens) {
        if (N < 1 || n < 1) throw std::invalid_argument("character: modulus and order must be positive");
        std::vector<int> e(static_cast<std::size_t>(N), -2);
        for (std::int64_t a = 0; a < N; ++a)
            if (gcd(a, N) != 1 && N > 1) e[static_cast<std::size_t>(a)] = -1;
        std::size_t one = static_cast<std::size_t>(mod(1, N));
        e[one] = 0;
        std::deque<std::int64_t> queue{mod(1, N)};
        while (!queue.empty()) {
            std::int64_t a = queue.front();
            queue.pop_front();
            for (auto [g, k] : gens) {
                if (gcd(g, N) != 1) throw std::invalid_argument("character: generator not a unit");
                std::int64_t b = mod(a * g, N);
                int eb = static_cast<int>(mod(e[static_cast<std::size_t>(a)] + k, n));
                int& slot = e[static_cast<std::size_t>(b)];
                if (slot == -2) {
                    slot = eb;
                    queue.push_back(b);
                } else if (slot != eb) {
                    throw std::invalid_argument("character: inconsistent generator exponents");
                }
            }
        }
        for (auto v : e)
            if (v == -2) throw std::invalid_argument("character: generators do not generate (Z/NZ)^x");
        return DirichletCharacter(N, n, std::move(e));
    }

    // Kronecker symbol (D/.) for a fundamental discriminant D, modulus |D|.
    static DirichletCharacter quadratic(std::int64_t D) {
        std::int64_t N = D < 0 ? -D : D;
        if (N < 1) throw std::invalid_argument("quadratic: D must be nonzero");
        std::vector<int> e(static_cast<std::size_t>(N));
        for (std::int64_t a = 0; a < N; ++a) {
            if (gcd(a, N) != 1 && N > 1) { e[static_cast<std::size_t>(a)] = -1; continue; }
            // kronecker(D, a) for a > 0; use a + N when a = 0 (N = 1)
            int s = kronecker(D, a == 0 ? N : a);
            if (s == 0) throw std::invalid_argument("quadratic: not a fundamental discriminant");
            e[static_cast<std::size_t>(a)] = s == 1 ? 0 : 1;
        }
        DirichletCharacter c(N, 2, std::move(e));
        c.check_multiplicative();
        return c;
    }

    // Raw exponent table; validated for multiplicativity.
    static DirichletCharacter from_exponents(std::int64_t N, std::int64_t n, std::vector<int> e) {
        if (static_cast<std::int64_t>(e.size()) != N) throw std::invalid_argument("character: table size");
        DirichletCharacter c(N, n, std::move(e));
        c.check_multiplicative();
        return c;
    }

    std::int64_t modulus() const { return N_; }
    std::int64_t value_order() const { return n_; }

    // Exponent of chi(a) or -1.
    int exponent(std::int64_t a) const { return exps_[static_cast<std::size_t>(mod(a, N_))]; }
    bool is_zero_at(std::int64_t a) const { return exponent(a) < 0; }

    CyclotomicNumber value(std::int64_t a) const {
        int k = exponent(a);
        if (k < 0) return CyclotomicNumber(n_);
        return CyclotomicNumber::zeta(n_, k);
    }

    // Real characters only: value as an integer in {-1, 0, 1}.
    int sign_value(std::int64_t a) const {
        int k = exponent(a);
        if (k < 0) return 0;
        std::int64_t twice = 2 * k;
        if (twice % n_ != 0) throw std::domain_error("sign_value: character is not real");
        return (twice / n_) % 2 == 0 ? 1 : -1;
    }

    bool is_real() const {
        for (auto k : exps_)
            if (k >= 0 && (2 * k) % n_ != 0) return false;
        return true;
    }

    bool is_trivial() const {
        for (auto k : exps_)
            if (k > 0) return false;
        return true;
    }

    // Smallest d | N with chi trivial on units congruent to 1 mod d.
    std::int64_t conductor() const {
        for (auto d : divisors(N_)) {
            bool ok = true;
            for (std::int64_t a = 1; a < N_ && ok; a += d)
                if (gcd(a, N_) == 1 && exponent(a) != 0) ok = false;
            if (ok) return d;
        }
        return N_;
    }

    bool is_primitive() const { return conductor() == N_; }

    int parity() const { return N_ <= 2 ? 1 : sign_of_minus_one(); }

    // Multiplicative order of the character.
    std::int64_t order() const {
        std::int64_t g = n_;
        for (auto k : exps_)
            if (k >= 0) g = gcd(g, k);
        return n_ / g;
    }

    // Same character with value order m (n | m).
    DirichletCharacter with_value_order(std::int64_t m) const {
        if (m % n_) throw std::invalid_argument("with_value_order: need n | m");
        std::vector<int> e = exps_;
        for (auto& k : e)
            if (k >= 0) k = static_cast<int>(k * (m / n_));
        return DirichletCharacter(N_, m, std::move(e));
    }

    // Values in the smallest mu_{order}.
    DirichletCharacter minimized() const {
        std::int64_t o = order();
        std::vector<int> e = exps_;
        for (auto& k : e)
            if (k >= 0) k = static_cast<int>(k / (n_ / o));
        return DirichletCharacter(N_, o, std::move(e));
    }

    // Same character viewed mod M, N | M.
    DirichletCharacter extend(std::int64_t M) const {
        if (M % N_) throw std::invalid_argument("extend: modulus must be a multiple");
        std::vector<int> e(static_cast<std::size_t>(M));
        for (std::int64_t a = 0; a < M; ++a)
            e[static_cast<std::size_t>(a)] = gcd(a, M) == 1 || M == 1 ? exponent(a) : -1;
        return DirichletCharacter(M, n_, std::move(e));
    }

    // Induced primitive character mod its conductor.
    DirichletCharacter primitive() const {
        std::int64_t f = conductor();
        if (f == N_) return *this;
        std::vector<int> e(static_cast<std::size_t>(f));
        for (std::int64_t a = 0; a < f; ++a) {
            if (gcd(a, f) != 1 && f > 1) { e[static_cast<std::size_t>(a)] = -1; continue; }
            std::int64_t b = a;
            while (gcd(b, N_) != 1) b += f;
            e[static_cast<std::size_t>(a)] = exponent(b);
        }
        return DirichletCharacter(f, n_, std::move(e));
    }

    DirichletCharacter conj() const {
        std::vector<int> e = exps_;
        for (auto& k : e)
            if (k >= 0) k = static_cast<int>(mod(-k, n_));
        return DirichletCharacter(N_, n_, std::move(e));
    }

    DirichletCharacter pow(std::int64_t r) const {
        std::vector<int> e = exps_;
        for (auto& k : e)
            if (k >= 0) k = static_cast<int>(mod(static_cast<std::int64_t>(k) * r, n_));
        return DirichletCharacter(N_, n_, std::move(e));
    }

    // Product, viewed mod lcm of moduli with value order lcm of orders.
    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
        std::int64_t M = lcm(a.N_, b.N_), n = lcm(a.n_, b.n_);
        DirichletCharacter x = a.extend(M).with_value_order(n), y = b.extend(M).with_value_order(n);
        std::vector<int> e(static_cast<std::size_t>(M));
        for (std::int64_t t = 0; t < M; ++t) {
            int i = x.exponent(t), j = y.exponent(t);
            e[static_cast<std::size_t>(t)] = (i < 0 || j < 0) ? -1 : static_cast<int>(mod(i + j, n));
        }
        return DirichletCharacter(M, n, std::move(e));
    }

    // Pointwise equality as functions on Z (same modulus required).
    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        if (a.N_ != b.N_) return false;
        std::int64_t n = lcm(a.n_, b.n_);
        auto x = a.with_value_order(n), y = b.with_value_order(n);
        return x.exps_ == y.exps_;
    }

    std::string descriptor() const {
        std::ostringstream os;
        os << "mod=" << N_ << ";ord=" << n_ << ";cond=" << conductor();
        return os.str();
    }

private:
    DirichletCharacter(std::int64_t N, std::int64_t n, std::vector<int> e) : N_(N), n_(n), exps_(std::move(e)) {}

    int sign_of_minus_one() const {
        int k = exponent(N_ - 1);
        return (2 * k) % n_ == 0 && ((2 * k) / n_) % 2 == 0 ? 1 : -1;
    }

    void check_multiplicative() const {
        for (std::int64_t a = 1; a < N_; ++a)
            for (std::int64_t b = a; b < N_; ++b) {
                int i = exponent(a), j = exponent(b), k = exponent(a * b);
                if ((i < 0 || j < 0) != (k < 0)) throw std::logic_error("character: not multiplicative");
                if (k >= 0 && mod(i + j, n_) != k) throw std::logic_error("character: not multiplicative");
            }
    }

    std::int64_t N_;
    std::int64_t n_;
    std::vector<int> exps_;
};

// omega_p^r mod p with values in mu_{p-1}; omega(g) = zeta_{p-1} for the
// least primitive root g, which matches make_embedding.
inline DirichletCharacter teichmuller_character(std::int64_t p, std::int64_t r) {
    require_odd_prime(p);
    std::int64_t g = primitive_root(p);
    return DirichletCharacter::from_generators(p, p - 1, {{g, mod(r, p - 1)}});
}

inline int parity(const DirichletCharacter& chi) { return chi.parity(); }
inline std::int64_t conductor(const DirichletCharacter& chi) { return chi.conductor(); }

// Gauss sum of the attached primitive character, in Q(zeta_lcm(cond, n)).
inline CyclotomicNumber gauss_sum(const DirichletCharacter& chi) {
    DirichletCharacter c = chi.primitive();
    std::int64_t f = c.modulus(), n = c.value_order();
    if (f == 1) return CyclotomicNumber::rational(1);
    std::int64_t L = lcm(f, n);
    std::vector<Integer> v(static_cast<std::size_t>(L), 0);
    for (std::int64_t a = 1; a < f; ++a) {
        int k = c.exponent(a);
        if (k < 0) continue;
        v[static_cast<std::size_t>(mod(k * (L / n) + a * (L / f), L))] += 1;
    }
    return CyclotomicNumber::from_exponent_vector(L, v);
}

// chi = chi_p * chi', cond(chi_p) a power of p and cond(chi') prime to p.
// Both are returned modulo their conductors.
inline std::pair<DirichletCharacter, DirichletCharacter> decompose_p_part(const DirichletCharacter& chi, std::int64_t p) {
    require_prime(p);
    DirichletCharacter c = chi.primitive();
    std::int64_t fq = c.modulus(), fp = 1;
    while (fq % p == 0) { fq /= p; fp *= p; }
    // value at a of the factor mod m1: chi(b) with b = a mod m1, b = 1 mod m2
    auto part = [&](std::int64_t m1, std::int64_t m2) {
        std::vector<int> e(static_cast<std::size_t>(m1));
        for (std::int64_t a = 0; a < m1; ++a) {
            if (m1 > 1 && gcd(a, m1) != 1) { e[static_cast<std::size_t>(a)] = -1; continue; }
            std::int64_t b = mod(a, m1);
            while (mod(b, m2) != mod(1, m2) || gcd(b, m1 * m2) != 1) b += m1;
            e[static_cast<std::size_t>(a)] = c.exponent(b);
        }
        return DirichletCharacter::from_exponents(m1, c.value_order(), std::move(e));
    };
    return {part(fp, fq), part(fq, fp)};
}

// G(chi) = chi_p(cond chi') chi'(cond chi_p) G(chi_p) G(chi') for primitive chi.
inline bool gauss_factorization_check(const DirichletCharacter& chi, std::int64_t p) {
    auto [cp, cq] = decompose_p_part(chi, p);
    CyclotomicNumber lhs = gauss_sum(chi);
    CyclotomicNumber rhs = cp.value(cq.modulus()) * cq.value(cp.modulus()) * gauss_sum(cp) * gauss_sum(cq);
    return lhs == rhs;
}

// Character of (Z/vZ)^x with values in F_q^x, q = p^r. Values are stored as
// discrete logs with respect to a fixed generator of F_q^x.
struct ResidualCharacter {
    std::int64_t modulus = 1;
    std::int64_t prime = 3;
    int degree = 1;              // r
    std::vector<int> logs;       // per residue; -1 off the unit group

    std::int64_t field_order() const {
        std::int64_t q = 1;
        for (int i = 0; i < degree; ++i) q *= prime;
        return q;
    }

    // Lift of the values: a Dirichlet character with values in mu_{q-1}.
    DirichletCharacter as_dirichlet() const {
        std::int64_t q1 = field_order() - 1;
        std::vector<std::pair<std::int64_t, std::int64_t>> gens;
        for (std::int64_t a = 1; a < std::max<std::int64_t>(modulus, 2); ++a)
            if (gcd(a, modulus) == 1) gens.emplace_back(a, logs[static_cast<std::size_t>(mod(a, modulus))]);
        if (modulus == 1) return DirichletCharacter::trivial(1).with_value_order(q1);
        return DirichletCharacter::from_generators(modulus, q1, gens);
    }

    // From a Dirichlet character whose order divides q - 1.
    static ResidualCharacter reduce(const DirichletCharacter& chi, std::int64_t p, int r = 1) {
        ResidualCharacter rc;
        rc.modulus = chi.modulus();
        rc.prime = p;
        rc.degree = r;
        std::int64_t q1 = rc.field_order() - 1;
        DirichletCharacter m = chi.minimized();
        if (q1 % m.value_order()) throw std::invalid_argument("reduce: order does not divide q - 1");
        for (std::int64_t a = 0; a < chi.modulus(); ++a) {
            int k = m.exponent(a);
            rc.logs.push_back(k < 0 ? -1 : static_cast<int>(k * (q1 / m.value_order())));
        }
        return rc;
    }

    // Values in F_p for r = 1, using the least primitive root as generator.
    std::int64_t value_mod_p(std::int64_t a) const {
        if (degree != 1) throw std::domain_error("value_mod_p: only r = 1");
        int k = logs[static_cast<std::size_t>(mod(a, modulus))];
        if (k < 0) return 0;
        return powmod(primitive_root(prime), k, prime);
    }

    bool valid() const {
        // trivial on the p-Sylow part: automatically true since values have order dividing q - 1,
        // checked here as multiplicativity
        for (std::int64_t a = 1; a < modulus; ++a)
            for (std::int64_t b = 1; b < modulus; ++b) {
                int i = logs[static_cast<std::size_t>(a)], j = logs[static_cast<std::size_t>(b)];
                int k = logs[static_cast<std::size_t>(mod(a * b, modulus))];
                if (i < 0 || j < 0) continue;
                if (mod(i + j, field_order() - 1) != k) return false;
            }
        return true;
    }
};

// Lift a residual character to a Dirichlet character of order prime to p via
// the Teichmueller character of F_q; the conductor is v0 * p^min(a, 1).
inline DirichletCharacter lift_residual_character(const ResidualCharacter& rc, std::int64_t p) {
    if (rc.prime != p) throw std::invalid_argument("lift_residual_character: prime mismatch");
    if (!rc.valid()) throw std::invalid_argument("lift_residual_character: not a character");
    return rc.as_dirichlet().minimized();
}

// Residual character of omega_p: reduction of teichmuller_character(p, 1).
inline ResidualCharacter residual_teichmuller(std::int64_t p) {
    return ResidualCharacter::reduce(teichmuller_character(p, 1), p);
}

// Generators of (Z/NZ)^x with their orders, one or two per prime power
// (CRT-lifted so they are 1 at the other prime powers).
inline std::vector<std::pair<std::int64_t, std::int64_t>> unit_group_generators(std::int64_t N) {
    std::vector<std::pair<std::int64_t, std::int64_t>> gens;
    if (N <= 2) return gens;
    for (auto [q, e] : factorize(N)) {
        std::int64_t qe = 1;
        for (int i = 0; i < e; ++i) qe *= q;
        std::int64_t rest = N / qe;
        auto crt = [&](std::int64_t g) {
            // x = g mod qe, x = 1 mod rest
            std::int64_t x = g;
            while (mod(x, rest) != mod(1, rest)) x += qe;
            return mod(x, N);
        };
        if (q == 2) {
            if (e == 1) continue;
            gens.emplace_back(crt(qe - 1), 2);
            if (e >= 3) gens.emplace_back(crt(5), qe / 4);
            continue;
        }
        // a primitive root mod q that stays primitive mod q^2 generates mod q^e
        std::int64_t g = primitive_root(q);
        if (e > 1 && powmod(g, q - 1, q * q) == 1) g += q;
        gens.emplace_back(crt(g), qe / q * (q - 1));
    }
    return gens;
}

// Every character mod N whose values lie in mu_n.
inline std::vector<DirichletCharacter> characters_mod(std::int64_t N, std::int64_t n) {
    auto gens = unit_group_generators(N);
    std::vector<DirichletCharacter> out;
    if (gens.empty()) {
        out.push_back(DirichletCharacter::trivial(N).with_value_order(n));
        return out;
    }
    std::vector<std::int64_t> step(gens.size()), count(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        std::int64_t g = gcd(n, gens[i].second);
        step[i] = n / g;
        count[i] = g;
    }
    std::vector<std::int64_t> idx(gens.size(), 0);
    while (true) {
        std::vector<std::pair<std::int64_t, std::int64_t>> assign;
        for (std::size_t i = 0; i < gens.size(); ++i) assign.emplace_back(gens[i].first, idx[i] * step[i]);
        out.push_back(DirichletCharacter::from_generators(N, n, assign));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == count[k]) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return out;
}

// Descriptor: mod=<N>;gens=<g1:e1,...>;ord=<n>, or triv<N>, quad<D>, teich<p>^<r>.
inline DirichletCharacter parse_character(const std::string& s) {
    auto num = [&](const std::string& t) -> std::int64_t {
        std::size_t pos = 0;
        long long v = std::stoll(t, &pos);
        if (pos != t.size()) throw std::invalid_argument("character descriptor: bad number '" + t + "'");
        return v;
    };
    try {
        if (s.rfind("triv", 0) == 0) return DirichletCharacter::trivial(num(s.substr(4)));
        if (s.rfind("quad", 0) == 0) return DirichletCharacter::quadratic(num(s.substr(4)));
        if (s.rfind("teich", 0) == 0) {
            std::string rest = s.substr(5);
            auto caret = rest.find('^');
            std::int64_t p = num(rest.substr(0, caret));
            std::int64_t r = caret == std::string::npos ? 1 : num(rest.substr(caret + 1));
            return teichmuller_character(p, r);
        }
        std::int64_t N = -1, n = -1;
        std::vector<std::pair<std::int64_t, std::int64_t>> gens;
        bool have_gens = false;
        std::stringstream ss(s);
        std::string field;
        while (std::getline(ss, field, ';')) {
            auto eq = field.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("character descriptor: missing '='");
            std::string key = field.substr(0, eq), val = field.substr(eq + 1);
            if (key == "mod") N = num(val);
            else if (key == "ord") n = num(val);
            else if (key == "gens") {
                have_gens = true;
                std::stringstream gs(val);
                std::string item;
                while (std::getline(gs, item, ',')) {
                    if (item.empty()) continue;
                    auto c = item.find(':');
                    if (c == std::string::npos) throw std::invalid_argument("character descriptor: generator needs g:e");
                    gens.emplace_back(num(item.substr(0, c)), num(item.substr(c + 1)));
                }
            } else throw std::invalid_argument("character descriptor: unknown key '" + key + "'");
        }
        if (N < 1 || n < 1 || !have_gens) throw std::invalid_argument("character descriptor: need mod, gens and ord");
        if (N == 1) return DirichletCharacter::trivial(1).with_value_order(n);
        return DirichletCharacter::from_generators(N, n, gens);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("character descriptor: number out of range");
    }
}

}  // namespace iwr
