#include "test_support.hpp"

using namespace iwr;
using namespace iwr::testing;

namespace {

// v_p by repeated division, independent of the library routine.
int trial_valuation(Integer n, std::int64_t p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace

TEST(PadicValuation, Examples) {
    EXPECT_EQ(padic_valuation(Rational(1), 11), 0);
    EXPECT_EQ(padic_valuation(Rational(3003125), 11), 0);
    EXPECT_EQ(padic_valuation(Rational(3003125), 5), 5);
    EXPECT_EQ(trial_valuation(3003125, 5), 5);
    EXPECT_EQ(Integer(3003125), ipow(5, 5) * 31 * 31);
    EXPECT_EQ(padic_valuation(Rational(7, 121), 11), -2);
}

TEST(PadicValuation, MatchesTrialDivision) {
    for (int i = 0; i < 200; ++i) {
        Integer a = static_cast<long>(uniform(1, 1'000'000)), b = static_cast<long>(uniform(1, 1'000'000));
        for (std::int64_t p : {3, 5, 7, 11}) {
            Rational q(a, b);
            q.canonicalize();
            EXPECT_EQ(padic_valuation(q, p), trial_valuation(a, p) - trial_valuation(b, p));
        }
    }
}

TEST(Teichmuller, Examples) {
    const int M = 6;
    EXPECT_TRUE(teichmuller_lift(1, 11, M).equals(PadicNumber::from_int(1, 11, M)));
    EXPECT_TRUE(teichmuller_lift(10, 11, M).equals(PadicNumber::from_int(-1, 11, M)));
    // fixed point of a -> a^11 starting from 2, to 3 digits
    Integer m = ipow(11, 3), a = 2, prev = -1;
    while (a != prev) {
        prev = a;
        mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), 11, m.get_mpz_t());
    }
    EXPECT_EQ(teichmuller_lift(2, 11, 3).residue(3), a);
}

TEST(Teichmuller, RootOfUnity) {
    for (std::int64_t p : {3, 5, 7, 11, 13}) {
        for (std::int64_t a = 1; a < p; ++a) {
            auto w = teichmuller_lift(a, p, 10);
            EXPECT_TRUE(w.pow(p - 1).equals(PadicNumber::from_int(1, p, 10))) << a << " mod " << p;
            EXPECT_EQ(mod(w.residue(1), Integer(static_cast<long>(p))), a);
        }
    }
}

TEST(Hensel, Examples) {
    const int M = 8;
    auto r = hensel_root({-3, 1}, 3, 7, M);
    EXPECT_TRUE(r.equals(PadicNumber::from_int(3, 7, M)));
    auto s = hensel_root({-5, 0, 1}, 4, 11, M);
    EXPECT_EQ(s.residue(1), 4);
    EXPECT_TRUE((s * s).equals(PadicNumber::from_int(5, 11, M)));
    const IntPoly& phi10 = cyclotomic_polynomial(10);
    auto z = hensel_root(phi10, 2, 11, M);  // 2 has order 10 mod 11
    Integer m = ipow(11, M);
    EXPECT_EQ(eval_mod(phi10, z.residue(M), m), 0);
    EXPECT_THROW(hensel_root({-5, 0, 1}, 3, 11, M), std::domain_error);
}

TEST(Embedding, Examples) {
    auto e = make_embedding(10, 11, 8);
    EXPECT_TRUE(embed_cyclotomic(CyclotomicNumber::rational(1, 10), e).equals(PadicNumber::from_int(1, 11, 8)));
    EXPECT_TRUE(embed_cyclotomic(CyclotomicNumber::zeta(10), e).equals(teichmuller_lift(2, 11, 8)));
    EXPECT_TRUE(embed_cyclotomic(CyclotomicNumber::zeta(10, 5), e).equals(PadicNumber::from_int(-1, 11, 8)));
    EXPECT_THROW(make_embedding(4, 11, 8), std::invalid_argument);
}

TEST(Embedding, RingHomomorphism) {
    auto e = make_embedding(10, 11, 8);
    for (int i = 0; i < 50; ++i) {
        std::vector<Rational> ca, cb;
        for (int k = 0; k < 4; ++k) {
            ca.push_back(random_rational(30, 12));
            cb.push_back(random_rational(30, 12));
        }
        auto a = CyclotomicNumber::from_coefficients(10, ca), b = CyclotomicNumber::from_coefficients(10, cb);
        auto ea = embed_cyclotomic(a, e), eb = embed_cyclotomic(b, e);
        EXPECT_TRUE(embed_cyclotomic(a * b, e).equals(ea * eb));
        EXPECT_TRUE(embed_cyclotomic(a + b, e).equals(ea + eb));
    }
}

TEST(PadicLog, Examples) {
    const std::int64_t p = 11;
    const int M = 4;
    EXPECT_TRUE(padic_log(PadicNumber::from_int(1, p, M)).is_zero());
    // alternating series for log(1 + p), summed directly mod p^M
    Rational s = 0;
    for (int n = 1; n < 12; ++n) s += Rational(ipow(p, n) * (n % 2 ? 1 : -1), n);
    s.canonicalize();
    Integer m = ipow(p, M);
    EXPECT_EQ(padic_log(PadicNumber::from_int(1 + p, p, M)).residue(M), rational_mod(s, m));
}

TEST(PadicLog, Homomorphism) {
    const std::int64_t p = 7;
    const int M = 10;
    for (int i = 0; i < 50; ++i) {
        auto x = PadicNumber::from_int(1 + p * uniform(0, 1000), p, M);
        auto y = PadicNumber::from_int(1 + p * uniform(0, 1000), p, M);
        EXPECT_TRUE(padic_log(x * y).equals(padic_log(x) + padic_log(y)));
    }
    for (std::int64_t a = 1; a < p; ++a) EXPECT_TRUE(padic_log(teichmuller_lift(a, p, M).pow(p - 1)).is_zero());
}

TEST(PadicNumber, ArithmeticAndPrecision) {
    auto x = PadicNumber::from_rational(Rational(3, 11), 11, 6);
    EXPECT_EQ(x.valuation(), -1);
    auto y = x * PadicNumber::from_int(11, 11, 6);
    EXPECT_TRUE(y.equals(PadicNumber::from_int(3, 11, 6)));
    auto z = PadicNumber::from_integer_mod(ipow(11, 8), 11, 6);
    EXPECT_EQ(PadicNumber::from_int(ipow(11, 8).get_si(), 11, 6).valuation(), 8);
    EXPECT_TRUE(z.is_zero());
    EXPECT_TRUE((x.inverse() * x).equals(PadicNumber::from_int(1, 11, 6)));
}

TEST(Cyclotomic, RingIdentities) {
    for (int i = 0; i < 60; ++i) {
        std::int64_t n = uniform(1, 40);
        auto rnd = [&] {
            std::vector<Rational> c;
            for (std::int64_t k = 0; k < euler_phi(n); ++k) c.push_back(random_rational(9, 5));
            return CyclotomicNumber::from_coefficients(n, c);
        };
        auto a = rnd(), b = rnd(), c = rnd();
        EXPECT_TRUE((a * b) * c == a * (b * c)) << n;
        EXPECT_TRUE(a * (b + c) == a * b + a * c) << n;
        EXPECT_TRUE(a * b == b * a) << n;
        if (!a.is_zero()) EXPECT_TRUE(a * a.inverse() == CyclotomicNumber::rational(1, n)) << n;
    }
    EXPECT_TRUE(CyclotomicNumber::zeta(10).pow(10) == CyclotomicNumber::rational(1, 10));
    EXPECT_TRUE(CyclotomicNumber::zeta(10, 5) == CyclotomicNumber::rational(-1, 10));
}

TEST(NumberTheory, Basics) {
    EXPECT_EQ(primitive_root(11), 2);
    EXPECT_EQ(primitive_root(5), 2);
    EXPECT_EQ(euler_phi(5819), 10 * 23 * 22);
    EXPECT_EQ(kronecker(-23, 2), 1);
    EXPECT_EQ(kronecker(-23, 5), -1);
    EXPECT_EQ(binomial(10, 3), 120);
    EXPECT_THROW(require_odd_prime(2), std::invalid_argument);
}
