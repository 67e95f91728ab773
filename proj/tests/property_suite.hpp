#pragma once

// Randomized property checks shared by the GTest suite and the acceptance runner.

#include "iwr/iwr.hpp"

#include <chrono>
#include <complex>
#include <random>
#include <string>
#include <vector>

namespace iwr::props {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;
    double seconds = 0;

    void fail(const std::string& what) {
        if (failures++ == 0) first_failure = what;
    }
    bool ok() const { return failures == 0 && cases > 0; }
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(g_); }
    template <class T>
    const T& pick(const std::vector<T>& v) { return v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(v.size()) - 1))]; }

private:
    std::mt19937_64 g_;
};

inline std::int64_t group_exponent(std::int64_t N) {
    std::int64_t n = 1;
    for (auto [g, o] : unit_group_generators(N)) n = lcm(n, o);
    return n;
}

inline const std::vector<DirichletCharacter>& all_characters(std::int64_t N) {
    static std::map<std::int64_t, std::vector<DirichletCharacter>> cache;
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, characters_mod(N, group_exponent(N))).first;
    return it->second;
}

namespace detail {

template <class F>
PropertyResult timed(const std::string& name, F&& body) {
    PropertyResult r;
    r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.fail(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// Numerical Gauss sum of the primitive character, as an independent oracle.
inline std::complex<double> numeric_gauss_sum(const DirichletCharacter& chi) {
    auto c = chi.primitive();
    std::int64_t f = c.modulus(), n = c.value_order();
    if (f == 1) return 1.0;
    const double tau = 2 * std::acos(-1.0);
    std::complex<double> s = 0;
    for (std::int64_t a = 1; a < f; ++a) {
        int k = c.exponent(a);
        if (k < 0) continue;
        s += std::polar(1.0, tau * (static_cast<double>(k) / static_cast<double>(n) + static_cast<double>(a) / static_cast<double>(f)));
    }
    return s;
}

inline std::complex<double> numeric(const CyclotomicNumber& z) {
    const double tau = 2 * std::acos(-1.0);
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < z.degree(); ++i)
        s += z.coeff(i).get_d() * std::polar(1.0, tau * static_cast<double>(i) / static_cast<double>(z.order()));
    return s;
}

}  // namespace detail

// a(mn) = a(m) a(n) for coprime m, n and a(l n) = a(l) a(n) - psi(l) l^(k-1) a(n / l).
inline PropertyResult eisenstein_multiplicativity(int cases = 500, std::uint64_t seed = 1) {
    return detail::timed("eisenstein multiplicativity and Hecke identity", [&](PropertyResult& r) {
        Rng rng(seed);
        const std::vector<std::int64_t> moduli{1, 3, 4, 5, 7, 8, 9, 12, 13};
        const std::int64_t n_max = 200;
        while (r.cases < cases) {
            auto theta = rng.pick(all_characters(rng.pick(moduli)));
            auto phi = rng.pick(all_characters(rng.pick(moduli)));
            if (theta.modulus() * phi.modulus() > 60) continue;
            int par = theta.parity() * phi.parity();
            std::vector<int> ls;
            for (int l = 1; l <= 6; ++l)
                if ((l % 2 == 0 ? 1 : -1) == par && !(l == 2 && theta.modulus() == 1 && phi.modulus() == 1)) ls.push_back(l);
            int l = rng.pick(ls);
            auto g = eisenstein_series(theta, phi, l, n_max);
            auto psi = theta * phi;
            ++r.cases;
            std::string tag = theta.descriptor() + " x " + phi.descriptor() + " l=" + std::to_string(l);
            for (int t = 0; t < 4; ++t) {
                std::int64_t m = rng.uniform(2, 14), n = rng.uniform(2, n_max / m);
                if (gcd(m, n) == 1 && !(g[m * n] == g[m] * g[n]))
                    r.fail(tag + ": a(" + std::to_string(m * n) + ") != a(m) a(n)");
                std::int64_t ell = rng.pick(std::vector<std::int64_t>{2, 3, 5, 7, 11, 13});
                std::int64_t k = rng.uniform(1, n_max / ell);
                CyclotomicNumber rhs = g[ell] * g[k];
                if (k % ell == 0 && psi.modulus() % ell != 0)
                    rhs = rhs - psi.value(ell) * g[k / ell] * Rational(ipow(ell, static_cast<unsigned long>(l - 1)));
                if (!(g[ell * k] == rhs)) r.fail(tag + ": Hecke identity at l=" + std::to_string(ell) + " n=" + std::to_string(k));
            }
        }
    });
}

// G(chi) G(conj chi) = chi(-1) cond(chi) for every primitive character of modulus <= max_modulus.
inline PropertyResult gauss_sum_norms(std::int64_t max_modulus = 60) {
    return detail::timed("Gauss sum norm identity", [&](PropertyResult& r) {
        for (std::int64_t N = 1; N <= max_modulus; ++N)
            for (auto& chi : all_characters(N)) {
                if (!chi.is_primitive()) continue;
                ++r.cases;
                auto G = gauss_sum(chi);
                auto lhs = G * gauss_sum(chi.conj());
                auto rhs = CyclotomicNumber::rational(Rational(chi.parity() * N));
                if (!(lhs == rhs)) r.fail("modulus " + std::to_string(N) + " " + chi.descriptor());
                if (std::abs(detail::numeric(G) - detail::numeric_gauss_sum(chi)) > 1e-9)
                    r.fail("numeric Gauss sum differs at modulus " + std::to_string(N));
            }
    });
}

// G(chi) = chi_p(cond chi') chi'(cond chi_p) G(chi_p) G(chi').
inline PropertyResult gauss_factorization(int cases = 100, std::uint64_t seed = 2) {
    return detail::timed("Gauss sum factorization", [&](PropertyResult& r) {
        Rng rng(seed);
        const std::vector<std::int64_t> primes{3, 5, 7, 11};
        while (r.cases < cases) {
            std::int64_t p = rng.pick(primes);
            std::int64_t pe = rng.uniform(0, 1) ? p : p * p;
            if (pe > 25) pe = p;
            std::int64_t q = rng.uniform(1, 13);
            if (gcd(q, p) != 1 || pe * q > 120) continue;
            auto& cp = rng.pick(all_characters(pe));
            auto& cq = rng.pick(all_characters(q));
            auto chi = (cp.extend(pe * q) * cq.extend(pe * q)).primitive();
            ++r.cases;
            if (!gauss_factorization_check(chi, p)) r.fail("library check fails for " + chi.descriptor());
            // numeric oracle of the same identity
            auto [a, b] = decompose_p_part(chi, p);
            auto rhs = detail::numeric(a.value(b.modulus()) * b.value(a.modulus())) * detail::numeric_gauss_sum(a) *
                       detail::numeric_gauss_sum(b);
            if (std::abs(rhs - detail::numeric_gauss_sum(chi)) > 1e-8) r.fail("numeric factorization fails for " + chi.descriptor());
        }
    });
}

// mu and lambda add under multiplication.
inline PropertyResult mu_lambda_additivity(int cases = 200, std::uint64_t seed = 3) {
    return detail::timed("mu/lambda additivity", [&](PropertyResult& r) {
        Rng rng(seed);
        const std::vector<std::int64_t> primes{3, 5, 7, 11};
        for (int k = 0; k < cases; ++k) {
            std::int64_t p = rng.pick(primes);
            auto ctx = IwasawaContext::make(p, 10, 14);
            auto random_series = [&](int& mu, int& lambda) {
                mu = static_cast<int>(rng.uniform(0, 2));
                lambda = static_cast<int>(rng.uniform(0, 5));
                std::vector<Integer> c(static_cast<std::size_t>(ctx.D));
                for (int i = 0; i < ctx.D; ++i) {
                    Integer x(static_cast<long>(rng.uniform(0, 1000000)));
                    if (i < lambda) x *= static_cast<long>(p);
                    if (i == lambda && x % p == 0) x += 1;
                    c[static_cast<std::size_t>(i)] = x * ipow(p, static_cast<unsigned long>(mu));
                }
                return PadicSeries::from_coefficients(ctx, c);
            };
            int m1, l1, m2, l2;
            auto f = random_series(m1, l1), g = random_series(m2, l2);
            ++r.cases;
            auto wf = invariants(f), wg = invariants(g), wfg = invariants(f * g);
            if (wf.mu != m1 || wf.lambda != l1 || wg.mu != m2 || wg.lambda != l2) r.fail("invariants of a factor are wrong");
            if (wfg.mu != m1 + m2 || wfg.lambda != l1 + l2)
                r.fail("product gives (" + std::to_string(wfg.mu) + "," + std::to_string(wfg.lambda) + "), expected (" +
                       std::to_string(m1 + m2) + "," + std::to_string(l1 + l2) + ")");
            auto cls = ideal_mod_pi(f * g);
            if ((m1 + m2 > 0) != cls.zero || (!cls.zero && cls.lambda != l1 + l2)) r.fail("ideal class mismatch");
        }
    });
}

// (g | chi) | conj(chi) = g | iota_M for chi mod M.
inline PropertyResult twist_untwist_depletion(int cases = 50, std::uint64_t seed = 4) {
    return detail::timed("twist-untwist depletion", [&](PropertyResult& r) {
        Rng rng(seed);
        const std::vector<std::int64_t> moduli{3, 4, 5, 7, 8, 9, 12};
        const std::int64_t n_max = 120;
        while (r.cases < cases) {
            EisensteinSeries g;
            if (rng.uniform(0, 3) == 0) {
                g = mazur_e2(rng.pick(std::vector<std::int64_t>{5, 7, 11, 23}), n_max);
            } else {
                auto theta = rng.pick(all_characters(rng.pick(moduli)));
                auto phi = rng.pick(all_characters(rng.pick(std::vector<std::int64_t>{1, 3, 4, 5})));
                int l = theta.parity() * phi.parity() > 0 ? 4 : 3;
                g = eisenstein_series(theta, phi, l, n_max);
            }
            std::int64_t M = rng.pick(moduli);
            auto chi = rng.pick(all_characters(M));
            ++r.cases;
            auto back = twist(twist(g, chi), chi.conj());
            auto dep = deplete(g, M);
            for (std::int64_t n = 0; n <= n_max; ++n) {
                bool expect_zero = gcd(n, M) != 1;
                if (!(back[n] == dep[n]) || (expect_zero ? !dep[n].is_zero() : !(dep[n] == g[n]))) {
                    r.fail("coefficient " + std::to_string(n) + " with chi " + chi.descriptor());
                    break;
                }
            }
        }
    });
}

// {r, inf} evaluated along continued-fraction and nearest-integer chains agree.
inline PropertyResult path_independence(const std::optional<std::filesystem::path>& cache, int cases = 100,
                                        std::uint64_t seed = 5) {
    return detail::timed("modular-symbol path independence", [&](PropertyResult& r) {
        Rng rng(seed);
        const std::vector<std::string> labels{"11.2.a.a", "19.2.a.a", "52.2.a.a"};
        std::vector<SymbolFunctional> syms;
        for (auto& label : labels) {
            auto f = load_newform(newform_path(default_data_dir(), label));
            for (int s : {1, -1}) syms.push_back(eigensymbol(load_or_build_space(f.level, s, cache), hecke_targets(f)));
        }
        for (int k = 0; k < cases; ++k) {
            Rational q(Integer(static_cast<long>(rng.uniform(-100000, 100000))), Integer(static_cast<long>(rng.uniform(1, 50000))));
            q.canonicalize();
            auto& x = syms[static_cast<std::size_t>(k) % syms.size()];
            ++r.cases;
            // a third chain: through r + 1, using invariance under translation
            Rational shifted = x.evaluate(q + 1);
            if (x.evaluate_chain(nearest_integer_chain(q)) != x.evaluate(q) || shifted != x.evaluate(q))
                r.fail("r = " + q.get_str());
        }
    });
}

inline std::vector<PropertyResult> run_all(const std::optional<std::filesystem::path>& cache) {
    return {eisenstein_multiplicativity(), gauss_sum_norms(),     gauss_factorization(),
            mu_lambda_additivity(),        twist_untwist_depletion(), path_independence(cache)};
}

}  // namespace iwr::props
