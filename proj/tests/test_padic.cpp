#include "test_support.hpp"

using namespace iwr;
using namespace iwr::testing;

namespace {

// x agrees with the rational q to the absolute precision of x.
bool matches(const PadicNumber& x, const Rational& q) {
    std::int64_t p = x.prime();
    if (q == 0) return x.is_zero();
    return x.equals(PadicNumber::from_rational(q, p, std::max(1, x.absolute_precision() - padic_valuation(q, p))));
}

}  // namespace

TEST(PadicArithmetic, AgreesWithRationals) {
    for (std::int64_t p : {3, 5, 11}) {
        int M = 7;
        for (int k = 0; k < 300; ++k) {
            Rational a = random_rational(5000, 400), b = random_rational(5000, 400);
            if (a == 0 || b == 0) continue;
            auto x = PadicNumber::from_rational(a, p, M), y = PadicNumber::from_rational(b, p, M);
            EXPECT_TRUE(matches(x * y, a * b)) << a.get_str() << " " << b.get_str();
            EXPECT_TRUE(matches(x / y, a / b)) << a.get_str() << " " << b.get_str();
            EXPECT_TRUE(matches(x + y, a + b)) << a.get_str() << " " << b.get_str();
            EXPECT_TRUE(matches(x - y, a - b)) << a.get_str() << " " << b.get_str();
        }
    }
}

TEST(PadicArithmetic, PrecisionTracking) {
    int M = 6;
    auto x = PadicNumber::from_int(1, 5, M), y = PadicNumber::from_int(1 + 5 * 5 * 5, 5, M);
    auto d = y - x;
    EXPECT_EQ(d.valuation(), 3);
    EXPECT_EQ(d.absolute_precision(), M);
    EXPECT_EQ(d.relative_precision(), M - 3);
    auto z = PadicNumber::from_int(1 + 15625, 5, M) - x;  // 5^6 is below precision
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.absolute_precision(), M);
    // products keep the smaller relative precision
    auto w = d * PadicNumber::from_int(2, 5, M);
    EXPECT_EQ(w.relative_precision(), M - 3);
    EXPECT_THROW(PadicNumber::zero(5, 4).inverse(), std::domain_error);
    EXPECT_THROW(PadicNumber::from_int(3, 5, 0), std::invalid_argument);
}

TEST(PadicArithmetic, Residues) {
    auto x = PadicNumber::from_rational(Rational(1, 3), 5, 6);
    Integer r = x.residue(6);
    EXPECT_EQ(mod(r * 3, Integer(15625)), 1);
    EXPECT_THROW(x.residue(7), std::domain_error);
    EXPECT_THROW(PadicNumber::from_rational(Rational(1, 5), 5, 6).residue(2), std::domain_error);
    EXPECT_EQ(PadicNumber::from_int(7, 5, 4).str(), "0:7");
    EXPECT_EQ(PadicNumber::zero(5, 4).str(), "4:0");
}

TEST(PadicArithmetic, PowersAndInverse) {
    for (int k = 0; k < 100; ++k) {
        Rational a = random_rational(300, 50);
        if (a == 0) continue;
        auto x = PadicNumber::from_rational(a, 7, 8);
        long e = static_cast<long>(uniform(-4, 6));
        Rational q = 1;
        for (long i = 0; i < std::abs(e); ++i) q *= a;
        if (e < 0) q = 1 / q;
        EXPECT_TRUE(matches(x.pow(e), q)) << a.get_str() << "^" << e;
    }
}

TEST(HenselLift, RootsOfRandomPolynomials) {
    // (x - r)(x - s) with r != s mod p: the lift of r is r itself
    for (int k = 0; k < 50; ++k) {
        std::int64_t p = 7, r = uniform(-200, 200), s = uniform(-200, 200);
        if (mod(r - s, p) == 0) continue;
        IntPoly f{Integer(static_cast<long>(r * s)), Integer(static_cast<long>(-(r + s))), 1};
        auto root = hensel_root(f, mod(r, p), p, 8);
        EXPECT_TRUE(root.equals(PadicNumber::from_int(r, p, 8))) << r << " " << s;
    }
}

TEST(PadicLog, Additivity) {
    std::int64_t p = 5;
    int M = 8;
    for (int k = 0; k < 50; ++k) {
        std::int64_t a = 1 + p * uniform(0, 1000), b = 1 + p * uniform(0, 1000);
        auto la = padic_log(PadicNumber::from_int(a, p, M)), lb = padic_log(PadicNumber::from_int(b, p, M));
        auto lab = padic_log(PadicNumber::from_int(a, p, M) * PadicNumber::from_int(b, p, M));
        EXPECT_TRUE(lab.equals(la + lb)) << a << " " << b;
        if (!la.is_zero()) EXPECT_GE(la.valuation(), 1);
    }
}
