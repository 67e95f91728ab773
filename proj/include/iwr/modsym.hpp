#pragma once

#include "iwr/dirichlet.hpp"
#include "iwr/linalg.hpp"
#include "iwr/numtheory.hpp"

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <unistd.h>

namespace iwr {

constexpr int kModsymCacheVersion = 1;

// ---- P^1(Z/NZ) ---------------------------------------------------------------

// Canonical representative of (u:v), or nullopt when gcd(u, v, N) > 1.
inline std::optional<std::pair<std::int64_t, std::int64_t>> p1_normalize(std::int64_t N, std::int64_t u, std::int64_t v) {
    if (N == 1) return std::make_pair<std::int64_t, std::int64_t>(0, 0);
    u = mod(u, N);
    v = mod(v, N);
    if (u == 0) {
        if (gcd(v, N) == 1) return std::make_pair<std::int64_t, std::int64_t>(0, 1);
        return std::nullopt;
    }
    Integer G, S, T;
    mpz_gcdext(G.get_mpz_t(), S.get_mpz_t(), T.get_mpz_t(), Integer(static_cast<long>(u)).get_mpz_t(),
               Integer(static_cast<long>(N)).get_mpz_t());
    std::int64_t g = G.get_si(), s = mod(S.get_si(), N);
    if (gcd(g, v) != 1) return std::nullopt;
    if (g != 1) {
        std::int64_t d = N / g;
        while (gcd(s, N) != 1) s = mod(s + d, N);
    }
    u = g;
    v = mod(s * v, N);
    std::int64_t best = v;
    if (g != 1) {
        // scale by units t = 1 mod N/g; they fix u = g
        std::int64_t Ng = N / g, vNg = mod(v * Ng, N), t = 1;
        for (std::int64_t k = 2; k <= g; ++k) {
            v = mod(v + vNg, N);
            t = mod(t + Ng, N);
            if (v < best && gcd(t, N) == 1) best = v;
        }
    }
    return std::make_pair(u, best);
}

class P1List {
public:
    explicit P1List(std::int64_t N) : N_(N) {
        if (N < 1) throw std::invalid_argument("P1List: N must be positive");
        // every class has a representative (u : v) with u | N or u = 0
        std::vector<std::int64_t> us{0};
        for (auto d : divisors(N))
            if (d < N) us.push_back(d);
        std::set<std::pair<std::int64_t, std::int64_t>> seen;
        for (auto u : us)
            for (std::int64_t v = 0; v < N; ++v)
                if (auto r = p1_normalize(N, u, v)) seen.insert(*r);
        list_.assign(seen.begin(), seen.end());
        for (std::size_t i = 0; i < list_.size(); ++i)
            index_.emplace(list_[i].first * N + list_[i].second, static_cast<int>(i));
        if (N <= kDenseLimit) {
            lookup_.assign(static_cast<std::size_t>(N * N), -1);
            for (std::int64_t u = 0; u < N; ++u)
                for (std::int64_t v = 0; v < N; ++v) lookup_[static_cast<std::size_t>(u * N + v)] = slow_index(u, v);
        }
    }

    std::int64_t level() const { return N_; }
    std::size_t size() const { return list_.size(); }
    const std::pair<std::int64_t, std::int64_t>& operator[](std::size_t i) const { return list_[i]; }

    // -1 when gcd(u, v, N) > 1.
    int index(std::int64_t u, std::int64_t v) const {
        u = mod(u, N_);
        v = mod(v, N_);
        if (!lookup_.empty()) return lookup_[static_cast<std::size_t>(u * N_ + v)];
        return slow_index(u, v);
    }

private:
    static constexpr std::int64_t kDenseLimit = 1024;

    int slow_index(std::int64_t u, std::int64_t v) const {
        auto r = p1_normalize(N_, u, v);
        if (!r) return -1;
        return index_.at(r->first * N_ + r->second);
    }

    std::int64_t N_;
    std::unordered_map<std::int64_t, int> index_;
    std::vector<std::pair<std::int64_t, std::int64_t>> list_;
    std::vector<int> lookup_;
};

// ---- classical counts for Gamma0(N) -------------------------------------------

inline std::int64_t gamma0_index(std::int64_t N) {
    std::int64_t r = N;
    for (auto l : prime_divisors(N)) r = r / l * (l + 1);
    return r;
}

inline std::int64_t gamma0_cusp_count(std::int64_t N) {
    std::int64_t c = 0;
    for (auto d : divisors(N)) c += euler_phi(gcd(d, N / d));
    return c;
}

inline std::int64_t gamma0_genus(std::int64_t N) {
    std::int64_t nu2 = 0, nu3 = 0;
    if (N % 4 != 0) {
        nu2 = 1;
        for (auto l : prime_divisors(N)) nu2 *= 1 + kronecker(-4, l);
    }
    if (N % 9 != 0) {
        nu3 = 1;
        for (auto l : prime_divisors(N)) nu3 *= 1 + kronecker(-3, l);
    }
    // g = 1 + mu/12 - nu2/4 - nu3/3 - c/2, times 12
    std::int64_t twelve_g = 12 + gamma0_index(N) - 3 * nu2 - 4 * nu3 - 6 * gamma0_cusp_count(N);
    if (twelve_g % 12) throw std::logic_error("genus formula not integral");
    return twelve_g / 12;
}

// Gamma0(N)-equivalence of cusps p1/q1, p2/q2 in lowest terms (q = 0 for infinity):
// equivalent iff s1 q2 = s2 q1 mod gcd(q1 q2, N) where s_j p_j = 1 mod q_j.
inline bool cusps_equivalent(std::int64_t N, std::int64_t p1, std::int64_t q1, std::int64_t p2, std::int64_t q2) {
    auto s_of = [](std::int64_t p, std::int64_t q) -> std::int64_t {
        if (q < 0) q = -q;
        if (q <= 1) return 0;
        return invmod(p, q);
    };
    std::int64_t g = gcd(gcd(q1 * q2, N), N);
    if (g == 0) g = N;
    std::int64_t s1 = s_of(p1, q1), s2 = s_of(p2, q2);
    if (q1 == 0) s1 = 1;
    if (q2 == 0) s2 = 1;
    return mod(s1 * q2 - s2 * q1, g) == 0;
}

// ---- the Manin-symbol space ------------------------------------------------------

class ModularSymbolSpace {
public:
    // sign in {-1, 0, +1}; 0 keeps both star eigenspaces.
    ModularSymbolSpace(std::int64_t N, int sign) : N_(N), sign_(sign), p1_(N) {
        if (sign < -1 || sign > 1) throw std::invalid_argument("ModularSymbolSpace: sign must be -1, 0 or 1");
        build();
    }

    std::int64_t level() const { return N_; }
    int sign() const { return sign_; }
    std::size_t dimension() const { return dim_; }
    const P1List& p1() const { return p1_; }
    std::size_t num_symbols() const { return p1_.size(); }

    // Quotient coordinates of the Manin symbol (u:v); zero vector when not a symbol.
    std::vector<Rational> symbol(std::int64_t u, std::int64_t v) const {
        int i = p1_.index(u, v);
        if (i < 0) return std::vector<Rational>(dim_, Rational(0));
        return vec_[static_cast<std::size_t>(i)];
    }
    const std::vector<Rational>& symbol_by_index(std::size_t i) const { return vec_[i]; }

    // Manin symbol index representing each basis vector.
    const std::vector<int>& basis_symbols() const { return basis_; }

    // Matrix of T_l (U_l when l | N) acting on column vectors in the quotient basis.
    RationalMatrix hecke_operator(std::int64_t l) const {
        require_prime(l);
        RationalMatrix T(dim_, dim_);
        auto mats = merel_matrices(l);
        for (std::size_t k = 0; k < dim_; ++k) {
            auto [u, v] = p1_[static_cast<std::size_t>(basis_[k])];
            for (auto& m : mats) {
                int i = p1_.index(u * m[0] + v * m[2], u * m[1] + v * m[3]);
                if (i < 0) continue;
                auto& w = vec_[static_cast<std::size_t>(i)];
                for (std::size_t r = 0; r < dim_; ++r)
                    if (w[r] != 0) T(r, k) += w[r];
            }
        }
        return T;
    }

    // Heilbronn-Merel matrices (a b; c d), a > b >= 0, d > c >= 0, ad - bc = l.
    static std::vector<std::array<std::int64_t, 4>> merel_matrices(std::int64_t l) {
        std::vector<std::array<std::int64_t, 4>> out;
        for (std::int64_t a = 1; a <= l; ++a)
            for (std::int64_t d = 1; d <= l; ++d) {
                if (a * d < l) continue;
                for (std::int64_t b = 0; b < a; ++b)
                    for (std::int64_t c = 0; c < d; ++c)
                        if (a * d - b * c == l) out.push_back({a, b, c, d});
            }
        return out;
    }

    // Cusp classes as (p, q) representatives; index 0 is infinity.
    std::vector<std::pair<std::int64_t, std::int64_t>> cusps() const {
        std::vector<std::pair<std::int64_t, std::int64_t>> reps{{1, 0}};
        for (std::size_t i = 0; i < p1_.size(); ++i) {
            auto g = lift_to_sl2(i);
            cusp_index(reps, g[0], g[2]);
            cusp_index(reps, g[1], g[3]);
        }
        return reps;
    }

    // Boundary map (sign 0 only): rows indexed by cusp classes.
    RationalMatrix boundary_map() const {
        if (sign_ != 0) throw std::logic_error("boundary_map: only for the full space");
        std::vector<std::pair<std::int64_t, std::int64_t>> reps{{1, 0}};
        std::vector<std::pair<int, int>> ends(dim_);
        for (std::size_t k = 0; k < dim_; ++k) {
            auto g = lift_to_sl2(static_cast<std::size_t>(basis_[k]));
            // {b/d, a/c} has boundary [a/c] - [b/d]
            ends[k] = {cusp_index(reps, g[0], g[2]), cusp_index(reps, g[1], g[3])};
        }
        RationalMatrix B(reps.size(), dim_);
        for (std::size_t k = 0; k < dim_; ++k) {
            B(static_cast<std::size_t>(ends[k].first), k) += 1;
            B(static_cast<std::size_t>(ends[k].second), k) -= 1;
        }
        return B;
    }

    std::size_t cuspidal_dimension() const {
        if (sign_ != 0) throw std::logic_error("cuspidal_dimension: only for the full space");
        return dim_ - rank(boundary_map());
    }

    // Integer matrix (a b; c d) of determinant 1 whose bottom row lifts symbol i.
    std::array<std::int64_t, 4> lift_to_sl2(std::size_t i) const {
        auto [u, v] = p1_[i];
        std::int64_t c = u, d = v;
        if (c == 0) c = N_;
        while (gcd(c, d) != 1) d += N_;
        Integer G, S, T;
        mpz_gcdext(G.get_mpz_t(), S.get_mpz_t(), T.get_mpz_t(), Integer(static_cast<long>(d)).get_mpz_t(),
                   Integer(static_cast<long>(c)).get_mpz_t());
        // S d + T c = 1 -> a = S, b = -T
        return {S.get_si(), -T.get_si(), c, d};
    }

    // ---- serialization ----
    std::string serialize() const {
        std::ostringstream os;
        os << "iwr-modsym " << kModsymCacheVersion << " " << N_ << " " << sign_ << "\n";
        os << "dim " << dim_ << " symbols " << p1_.size() << "\n";
        os << "basis";
        for (auto b : basis_) os << " " << b;
        os << "\n";
        for (std::size_t i = 0; i < vec_.size(); ++i) {
            os << i;
            for (std::size_t k = 0; k < dim_; ++k)
                if (vec_[i][k] != 0) os << " " << k << ":" << vec_[i][k].get_str();
            os << "\n";
        }
        return os.str();
    }

    static std::optional<ModularSymbolSpace> deserialize(const std::string& text, std::int64_t N, int sign) {
        std::istringstream is(text);
        std::string tag;
        int ver;
        std::int64_t n;
        int s;
        if (!(is >> tag >> ver >> n >> s) || tag != "iwr-modsym" || ver != kModsymCacheVersion || n != N || s != sign)
            return std::nullopt;
        ModularSymbolSpace sp(N, sign, Deferred{});
        std::size_t nsym;
        std::string w1, w2;
        if (!(is >> w1 >> sp.dim_ >> w2 >> nsym) || w1 != "dim" || w2 != "symbols" || nsym != sp.p1_.size())
            return std::nullopt;
        is >> w1;
        if (w1 != "basis") return std::nullopt;
        sp.basis_.resize(sp.dim_);
        for (auto& b : sp.basis_) is >> b;
        std::string line;
        std::getline(is, line);
        sp.vec_.assign(nsym, std::vector<Rational>(sp.dim_, Rational(0)));
        for (std::size_t i = 0; i < nsym; ++i) {
            if (!std::getline(is, line)) return std::nullopt;
            std::istringstream ls(line);
            std::size_t idx;
            ls >> idx;
            if (idx != i) return std::nullopt;
            std::string item;
            while (ls >> item) {
                auto c = item.find(':');
                std::size_t k = std::stoul(item.substr(0, c));
                if (k >= sp.dim_) return std::nullopt;
                sp.vec_[i][k] = Rational(item.substr(c + 1));
                sp.vec_[i][k].canonicalize();
            }
        }
        return sp;
    }

private:
    struct Deferred {};
    ModularSymbolSpace(std::int64_t N, int sign, Deferred) : N_(N), sign_(sign), p1_(N) {}

    int cusp_index(std::vector<std::pair<std::int64_t, std::int64_t>>& reps, std::int64_t p, std::int64_t q) const {
        std::int64_t g = gcd(p < 0 ? -p : p, q < 0 ? -q : q);
        if (g > 1) { p /= g; q /= g; }
        if (q < 0) { p = -p; q = -q; }
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (cusps_equivalent(N_, reps[i].first, reps[i].second, p, q)) return static_cast<int>(i);
        reps.emplace_back(p, q);
        return static_cast<int>(reps.size()) - 1;
    }

    void build() {
        std::size_t n = p1_.size();
        auto I = [&](std::int64_t u, std::int64_t v) { return static_cast<std::size_t>(p1_.index(u, v)); };
        // two-term (sigma) and star relations: x_i = c * x_j with c = +-1
        std::vector<std::vector<std::pair<std::size_t, int>>> adj(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto [u, v] = p1_[i];
            std::size_t j = I(v, -u);
            adj[i].emplace_back(j, -1);
            adj[j].emplace_back(i, -1);
            if (sign_ != 0) {
                std::size_t k = I(-u, v);
                adj[i].emplace_back(k, sign_);
                adj[k].emplace_back(i, sign_);
            }
        }
        std::vector<long> rep(n, -1);
        std::vector<int> coef(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (rep[i] >= 0) continue;
            rep[i] = static_cast<long>(i);
            coef[i] = 1;
            std::vector<std::size_t> stack{i}, comp{i};
            bool bad = false;
            while (!stack.empty()) {
                std::size_t a = stack.back();
                stack.pop_back();
                for (auto [b, c] : adj[a]) {
                    if (rep[b] < 0) {
                        rep[b] = static_cast<long>(i);
                        coef[b] = c * coef[a];
                        stack.push_back(b);
                        comp.push_back(b);
                    } else if (coef[b] != c * coef[a]) {
                        bad = true;
                    }
                }
            }
            if (bad)
                for (auto b : comp) coef[b] = 0;
        }
        std::vector<std::size_t> reps;
        std::vector<long> rep_col(n, -1);
        for (std::size_t i = 0; i < n; ++i)
            if (coef[i] != 0 && rep[i] == static_cast<long>(i)) {
                rep_col[i] = static_cast<long>(reps.size());
                reps.push_back(i);
            }
        std::size_t m = reps.size();
        // three-term relations x + x tau + x tau^2 = 0
        std::vector<std::map<std::size_t, long>> rows;
        for (std::size_t i = 0; i < n; ++i) {
            auto [u, v] = p1_[i];
            std::map<std::size_t, long> row;
            for (std::size_t t : {i, I(v, -u - v), I(-u - v, u)}) {
                if (coef[t] == 0) continue;
                row[static_cast<std::size_t>(rep_col[static_cast<std::size_t>(rep[t])])] += coef[t];
            }
            for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
            if (!row.empty()) rows.push_back(std::move(row));
        }
        RationalMatrix R(rows.size(), m);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (auto [c, x] : rows[r]) R(r, c) = x;
        auto piv = rref(R);
        std::vector<long> free_idx(m, -1);
        std::vector<bool> is_piv(m, false);
        for (auto c : piv) is_piv[c] = true;
        std::vector<std::size_t> free;
        for (std::size_t c = 0; c < m; ++c)
            if (!is_piv[c]) {
                free_idx[c] = static_cast<long>(free.size());
                free.push_back(c);
            }
        dim_ = free.size();
        std::vector<std::vector<Rational>> cls(m, std::vector<Rational>(dim_, Rational(0)));
        for (std::size_t c = 0; c < m; ++c)
            if (free_idx[c] >= 0) cls[c][static_cast<std::size_t>(free_idx[c])] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r)
            for (std::size_t k = 0; k < dim_; ++k) cls[piv[r]][k] = -R(r, free[k]);
        vec_.assign(n, std::vector<Rational>(dim_, Rational(0)));
        for (std::size_t i = 0; i < n; ++i) {
            if (coef[i] == 0) continue;
            auto& src = cls[static_cast<std::size_t>(rep_col[static_cast<std::size_t>(rep[i])])];
            for (std::size_t k = 0; k < dim_; ++k) vec_[i][k] = src[k] * coef[i];
        }
        for (auto c : free) basis_.push_back(static_cast<int>(reps[c]));
    }

    std::int64_t N_;
    int sign_;
    P1List p1_;
    std::size_t dim_ = 0;
    std::vector<std::vector<Rational>> vec_;
    std::vector<int> basis_;
};

// ---- cache -------------------------------------------------------------------------

// Directory from the explicit argument, else IWR_CACHE, else none.
inline std::optional<std::filesystem::path> resolve_cache_dir(const std::string& explicit_dir = "") {
    if (!explicit_dir.empty()) return std::filesystem::path(explicit_dir);
    if (const char* e = std::getenv("IWR_CACHE"); e && *e) return std::filesystem::path(e);
    return std::nullopt;
}

inline std::shared_ptr<const ModularSymbolSpace> load_or_build_space(std::int64_t N, int sign,
                                                                     const std::optional<std::filesystem::path>& dir) {
    std::filesystem::path file;
    if (dir) {
        file = *dir / ("modsym_N" + std::to_string(N) + "_s" + std::to_string(sign) + "_v" +
                       std::to_string(kModsymCacheVersion) + ".txt");
        std::ifstream in(file);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            if (auto sp = ModularSymbolSpace::deserialize(ss.str(), N, sign))
                return std::make_shared<const ModularSymbolSpace>(std::move(*sp));
        }
    }
    auto sp = std::make_shared<const ModularSymbolSpace>(N, sign);
    if (dir) {
        std::filesystem::create_directories(*dir);
        // write then rename so concurrent readers never see a partial file
        auto tmp = file;
        tmp += "." + std::to_string(::getpid()) + ".tmp";
        {
            std::ofstream out(tmp);
            out << sp->serialize();
        }
        std::error_code ec;
        std::filesystem::rename(tmp, file, ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }
    return sp;
}

// ---- evaluation --------------------------------------------------------------------

using Fraction = std::pair<Integer, Integer>;  // p / q, q may be 0 for infinity

// Continued-fraction convergents of r, preceded by 1/0.
inline std::vector<Fraction> convergent_chain(const Rational& r) {
    std::vector<Fraction> out{{1, 0}};
    Integer a = r.get_num(), b = r.get_den();
    Integer pm = 1, qm = 0, pk, qk;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    pk = q;
    qk = 1;
    out.emplace_back(pk, qk);
    Integer t = a - q * b;
    a = b;
    b = t;
    while (b != 0) {
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Integer np = q * pk + pm, nq = q * qk + qm;
        pm = pk;
        qm = qk;
        pk = np;
        qk = nq;
        out.emplace_back(pk, qk);
        t = a - q * b;
        a = b;
        b = t;
    }
    return out;
}

// Nearest-integer continued-fraction convergents of r, preceded by 1/0. A
// different unimodular chain from the same endpoints.
inline std::vector<Fraction> nearest_integer_chain(const Rational& r) {
    std::vector<Fraction> out{{1, 0}};
    Rational x = r;
    Integer pm = 1, qm = 0, pk, qk;
    auto nearest = [](const Rational& y) {
        Rational h = y + Rational(1, 2);
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), h.get_num().get_mpz_t(), h.get_den().get_mpz_t());
        return f;
    };
    Integer a0 = nearest(x);
    pk = a0;
    qk = 1;
    out.emplace_back(pk, qk);
    Rational frac = x - Rational(a0);
    while (frac != 0) {
        int eps = frac > 0 ? 1 : -1;
        x = 1 / (frac > 0 ? frac : -frac);
        Integer ak = nearest(x);
        Integer np = ak * pk + eps * pm, nq = ak * qk + eps * qm;
        pm = pk;
        qm = qk;
        pk = np;
        qk = nq;
        if (qk < 0) { pk = -pk; qk = -qk; }
        out.emplace_back(pk, qk);
        frac = x - Rational(ak);
    }
    return out;
}

// Manin symbol (u : v) of the unimodular path {p1/q1, p2/q2}.
inline std::pair<Integer, Integer> path_piece_symbol(const Fraction& a, const Fraction& b) {
    Integer det = b.first * a.second - a.first * b.second;
    if (det != 1 && det != -1) throw std::logic_error("path piece is not unimodular");
    return {det * b.second, a.second};
}

// Normalized eigensymbol x on {r, infinity} for the full Gamma0(N) space quotient.
class SymbolFunctional {
public:
    SymbolFunctional() = default;
    SymbolFunctional(std::shared_ptr<const ModularSymbolSpace> sp, std::vector<Rational> coords)
        : space_(std::move(sp)), coords_(std::move(coords)) {
        recompute();
    }

    const ModularSymbolSpace& space() const { return *space_; }
    int sign() const { return space_->sign(); }
    std::int64_t level() const { return space_->level(); }
    const std::vector<Rational>& coordinates() const { return coords_; }
    const Rational& normalization() const { return normalization_; }
    const std::vector<Rational>& manin_values() const { return values_; }

    // Rescale to content 1 on all Manin symbols, first nonzero value positive.
    SymbolFunctional normalized() const {
        Rational s = primitive_scaling(values_);
        SymbolFunctional r = *this;
        for (auto& c : r.coords_) c *= s;
        r.normalization_ = normalization_ * s;
        r.recompute();
        return r;
    }

    SymbolFunctional scaled(const Rational& s) const {
        SymbolFunctional r = *this;
        for (auto& c : r.coords_) c *= s;
        r.normalization_ = normalization_ * s;
        r.recompute();
        return r;
    }

    Rational manin_value(const Integer& u, const Integer& v) const {
        Integer N(static_cast<long>(level()));
        int i = space_->p1().index(mod(u, N).get_si(), mod(v, N).get_si());
        return i < 0 ? Rational(0) : values_[static_cast<std::size_t>(i)];
    }

    // Value on {r, infinity} along the given chain from infinity to r.
    Rational evaluate_chain(const std::vector<Fraction>& chain) const {
        Rational s = 0;
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            auto [u, v] = path_piece_symbol(chain[k], chain[k + 1]);
            s += manin_value(u, v);
        }
        return -s;
    }

    Rational evaluate(const Rational& r) const { return evaluate_chain(convergent_chain(r)); }

private:
    void recompute() {
        values_.assign(space_->num_symbols(), Rational(0));
        for (std::size_t i = 0; i < values_.size(); ++i) {
            auto& w = space_->symbol_by_index(i);
            Rational s = 0;
            for (std::size_t k = 0; k < w.size(); ++k)
                if (w[k] != 0) s += w[k] * coords_[k];
            values_[i] = s;
        }
    }

    std::shared_ptr<const ModularSymbolSpace> space_;
    std::vector<Rational> coords_;
    std::vector<Rational> values_;
    Rational normalization_ = 1;
};

struct EigenspaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unique (up to scalar) functional with x o T_l = a_l x for all targets, normalized.
inline SymbolFunctional eigensymbol(std::shared_ptr<const ModularSymbolSpace> sp,
                                    const std::vector<std::pair<std::int64_t, Integer>>& targets,
                                    const std::map<std::int64_t, RationalMatrix>* hecke_cache = nullptr) {
    if (sp->dimension() == 0) throw EigenspaceError("eigensymbol: space is zero");
    std::size_t D = sp->dimension();
    RationalMatrix stacked(0, D);
    for (auto& [l, a] : targets) {
        RationalMatrix T;
        if (hecke_cache && hecke_cache->count(l)) T = hecke_cache->at(l);
        else T = sp->hecke_operator(l);
        RationalMatrix A = T.transpose();
        for (std::size_t i = 0; i < D; ++i) A(i, i) -= Rational(a);
        stacked.append_rows(A);
    }
    auto ker = kernel(stacked);
    if (ker.size() != 1)
        throw EigenspaceError("eigensymbol: eigenspace has dimension " + std::to_string(ker.size()) + " at level " +
                              std::to_string(sp->level()) + " sign " + std::to_string(sp->sign()));
    return SymbolFunctional(sp, ker[0]).normalized();
}

// A modular symbol given by its values on {r, infinity}.
struct ModularSymbol {
    int sign = 1;
    std::int64_t level = 1;
    std::string description;
    Rational normalization = 1;
    std::function<Rational(const Rational&)> eval;

    Rational operator()(const Rational& r) const { return eval(r); }
    // {r1, r2} = {r1, inf} - {r2, inf}
    Rational path(const Rational& r1, const Rational& r2) const { return eval(r1) - eval(r2); }
};

inline ModularSymbol as_symbol(const SymbolFunctional& f, const std::string& desc = "") {
    ModularSymbol s;
    s.sign = f.sign();
    s.level = f.level();
    s.description = desc.empty() ? "level " + std::to_string(f.level()) : desc;
    s.normalization = f.normalization();
    auto keep = std::make_shared<SymbolFunctional>(f);
    s.eval = [keep](const Rational& r) { return keep->evaluate(r); };
    return s;
}

// Content-1 scaling over the Manin symbols of level N: values x({b/d, a/c})
// for SL2 lifts (a b; c d).
inline Rational content_scaling_on_level(const ModularSymbol& x, std::int64_t N) {
    P1List p1(N);
    std::vector<Rational> vals;
    vals.reserve(p1.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        auto [u, v] = p1[i];
        std::int64_t c = u == 0 ? N : u, d = v;
        while (d == 0 || gcd(c, d) != 1) d += N;
        Integer G, S, T;
        mpz_gcdext(G.get_mpz_t(), S.get_mpz_t(), T.get_mpz_t(), Integer(static_cast<long>(d)).get_mpz_t(),
                   Integer(static_cast<long>(c)).get_mpz_t());
        Integer a = S, b = -T;  // a d - b c = 1
        Rational r1(b, Integer(static_cast<long>(d))), r2(a, Integer(static_cast<long>(c)));
        r1.canonicalize();
        r2.canonicalize();
        vals.push_back(x.path(r1, r2));
    }
    return primitive_scaling(vals);
}

// Birch twisting sum: x_chi(r) = sum_{a mod C} chi(a) x(r + a/C), chi real and
// primitive of conductor C prime to the level. Result has sign x.sign * chi(-1)
// and is renormalized to content 1 on the Manin symbols of level N C^2.
inline ModularSymbol twist_symbol(const ModularSymbol& x, const DirichletCharacter& chi, bool renormalize = true) {
    DirichletCharacter c = chi.primitive();
    std::int64_t C = c.modulus();
    if (C == 1) return x;
    if (!c.is_real()) throw std::invalid_argument("twist_symbol: only characters with values +-1 are supported");
    if (gcd(C, x.level) != 1) throw std::invalid_argument("twist_symbol: conductor must be prime to the level");
    std::vector<std::pair<Rational, int>> shifts;
    for (std::int64_t a = 1; a < C; ++a) {
        int s = c.sign_value(a);
        if (s) shifts.emplace_back(Rational(a, C), s);
    }
    ModularSymbol t;
    t.sign = x.sign * c.parity();
    t.level = x.level * C * C;
    t.description = x.description + " twisted by a character of conductor " + std::to_string(C);
    auto base = std::make_shared<ModularSymbol>(x);
    auto sh = std::make_shared<std::vector<std::pair<Rational, int>>>(std::move(shifts));
    auto raw = [base, sh](const Rational& r) -> Rational {
        Rational s = 0;
        for (auto& [q, e] : *sh) s += e * (*base)(r + q);
        return s;
    };
    Rational scale = 1;
    if (renormalize) {
        ModularSymbol tmp = t;
        tmp.eval = raw;
        scale = content_scaling_on_level(tmp, t.level);
    }
    t.normalization = scale;
    t.eval = [raw, scale](const Rational& r) -> Rational { return scale * raw(r); };
    return t;
}

}  // namespace iwr
