#include "test_support.hpp"

using namespace iwr;
using namespace iwr::testing;

namespace {

// Random series with the given mu and distinguished polynomial times a unit.
struct Built {
    PadicSeries f;
    std::vector<Integer> P;  // monic, low to high
};

Built build_series(const IwasawaContext& ctx, int mu, int lambda) {
    std::int64_t p = ctx.p;
    Integer m = ctx.modulus();
    std::vector<Integer> P(static_cast<std::size_t>(lambda) + 1);
    for (int i = 0; i < lambda; ++i) P[static_cast<std::size_t>(i)] = mod(Integer(static_cast<long>(p * uniform(0, 1000))), m);
    P[static_cast<std::size_t>(lambda)] = 1;
    std::vector<Integer> U(static_cast<std::size_t>(ctx.D));
    for (auto& c : U) c = Integer(static_cast<long>(uniform(0, 100000)));
    if (U[0] % p == 0) U[0] += 1;
    auto f = PadicSeries::from_coefficients(ctx, P) * PadicSeries::from_coefficients(ctx, U);
    return {f.scaled(ipow(p, static_cast<unsigned long>(mu))), P};
}

}  // namespace

TEST(Invariants, Basic) {
    auto ctx = IwasawaContext::make(5, 8, 6);
    auto w = invariants(PadicSeries::constant(ctx, 5));
    EXPECT_EQ(w.mu, 1);
    EXPECT_EQ(w.lambda, 0);
    auto u = PadicSeries::from_coefficients(ctx, {3, 1, 7});
    auto t = invariants(PadicSeries::monomial(ctx, 1) * u);
    EXPECT_EQ(t.mu, 0);
    EXPECT_EQ(t.lambda, 1);
    EXPECT_EQ(invariants(u).lambda, 0);
    EXPECT_THROW(invariants(PadicSeries(ctx)), PrecisionError);
}

TEST(Invariants, RecoverWeierstrassFactors) {
    for (int k = 0; k < 60; ++k) {
        int mu = static_cast<int>(uniform(0, 2)), lambda = static_cast<int>(uniform(0, 3));
        std::int64_t p = k % 2 ? 5 : 7;
        auto ctx = IwasawaContext::make(p, 10, 16);
        auto b = build_series(ctx, mu, lambda);
        auto w = invariants(b.f);
        EXPECT_EQ(w.mu, mu);
        ASSERT_EQ(w.lambda, lambda);
        // uniqueness of the distinguished polynomial
        Integer pm = ipow(p, static_cast<unsigned long>(w.dist_precision));
        ASSERT_GT(w.dist_precision, 0);
        for (int i = 0; i <= lambda; ++i)
            EXPECT_EQ(mod(w.distinguished[static_cast<std::size_t>(i)] - b.P[static_cast<std::size_t>(i)], pm), 0)
                << "k=" << k << " i=" << i;
    }
}

TEST(IdealModPi, Classes) {
    auto ctx = IwasawaContext::make(11, 6, 11);
    auto unit = PadicSeries::from_coefficients(ctx, {2, 11, 5});
    EXPECT_EQ(ideal_mod_pi(unit).str(), "T^0");
    EXPECT_TRUE(ideal_mod_pi(unit).is_unit());
    auto t2 = PadicSeries::monomial(ctx, 2) * unit + PadicSeries::from_coefficients(ctx, {11, 22});
    EXPECT_EQ(ideal_mod_pi(t2).str(), "T^2");
    EXPECT_TRUE(ideal_mod_pi(unit.scaled(11)).zero);
    EXPECT_EQ(ideal_mod_pi(unit.scaled(11)).str(), "0");
}

TEST(Invariants, Additivity) {
    auto ctx = IwasawaContext::make(5, 12, 20);
    for (int k = 0; k < 40; ++k) {
        auto a = build_series(ctx, static_cast<int>(uniform(0, 1)), static_cast<int>(uniform(0, 3)));
        auto b = build_series(ctx, static_cast<int>(uniform(0, 1)), static_cast<int>(uniform(0, 3)));
        auto wa = invariants(a.f), wb = invariants(b.f), wab = invariants(a.f * b.f);
        EXPECT_EQ(wab.mu, wa.mu + wb.mu);
        EXPECT_EQ(wab.lambda, wa.lambda + wb.lambda);
    }
}

TEST(PadicSeries, SerializationRoundTrip) {
    auto ctx = IwasawaContext::make(7, 5, 9);
    for (int k = 0; k < 20; ++k) {
        auto f = build_series(ctx, static_cast<int>(uniform(0, 2)), static_cast<int>(uniform(0, 4))).f;
        auto g = PadicSeries::parse(f.serialize());
        EXPECT_TRUE(f == g) << f.serialize();
    }
    EXPECT_THROW(PadicSeries::parse("7, 5, 2, [0:1]"), std::invalid_argument);
    EXPECT_THROW(PadicSeries::parse("nonsense"), std::invalid_argument);
}

TEST(PadicSeries, InverseAndEvaluate) {
    auto ctx = IwasawaContext::make(5, 8, 12);
    auto f = PadicSeries::from_coefficients(ctx, {3, 4, 1, 9});
    auto one = f * f.inverse();
    EXPECT_TRUE(one == PadicSeries::constant(ctx, 1));
    EXPECT_THROW(PadicSeries::monomial(ctx, 1).inverse(), std::domain_error);
    // 3 + 4t + t^2 + 9t^3 at t = 5
    auto v = f.evaluate(PadicNumber::from_int(5, 5, 8));
    EXPECT_TRUE(v.equals(PadicNumber::from_int(3 + 20 + 25 + 9 * 125, 5, 8)));
}

TEST(EulerFactorSeries, TrivialPolynomial) {
    auto ctx = IwasawaContext::make(5, 6, 8);
    EulerPoly<PadicNumber> P;
    P.ell = 2;
    P.c = {PadicNumber::from_int(1, 5, 10)};
    EXPECT_TRUE(euler_factor_series(P, 2, 1, ctx) == PadicSeries::constant(ctx, 1));
    EXPECT_THROW(euler_factor_series(P, 5, 1, ctx), std::invalid_argument);
}

TEST(EulerFactorSeries, Evaluations) {
    std::int64_t p = 5;
    int M = 6;
    auto ctx = IwasawaContext::make(p, M, 24);
    for (std::int64_t ell : {2, 3, 7, 11}) {
        for (std::int64_t j : {0, 1, 3}) {
            EulerPoly<PadicNumber> P;
            P.ell = ell;
            P.c = {PadicNumber::from_int(1, p, 20), PadicNumber::from_int(-uniform(-9, 9), p, 20),
                   PadicNumber::from_int(ell * uniform(-3, 3), p, 20)};
            auto F = euler_factor_series(P, ell, j, ctx);
            // omega(ell) as the limit of ell^(p^k)
            auto omega = PadicNumber::from_int(ell, p, M + 2).pow(static_cast<long>(ipow(p, M + 2).get_si()));
            auto diamond_ell = PadicNumber::from_int(ell, p, M + 2) / omega;
            auto x0 = PadicNumber::from_int(ell, p, M + 2).pow(-(j + 1));
            for (int s = 0; s <= 3; ++s) {
                auto T = PadicNumber::from_int(p + 1, p, M + 2).pow(s) - PadicNumber::from_int(1, p, M + 2);
                auto x = x0 * diamond_ell.pow(s);
                auto expect = P.c[0] + P.c[1] * x + P.c[2] * x * x;
                auto got = s == 0 ? F.evaluate(PadicNumber::zero(p, M)) : F.evaluate(T);
                EXPECT_TRUE(got.equals(expect)) << "l=" << ell << " j=" << j << " s=" << s << " " << got.str() << " vs "
                                                << expect.str();
            }
        }
    }
}
