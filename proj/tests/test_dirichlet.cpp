#include "test_support.hpp"

using namespace iwr;
using namespace iwr::testing;

namespace {

bool same(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    std::int64_t L = lcm(a.order(), b.order());
    return a.lift(L) == b.lift(L);
}

bool same_values(const DirichletCharacter& a, const DirichletCharacter& b, std::int64_t N) {
    for (std::int64_t x = 1; x < N; ++x) {
        if (gcd(x, N) != 1) continue;
        if (!same(a.value(x), b.value(x))) return false;
    }
    return true;
}

}  // namespace

TEST(Conductor, Examples) {
    EXPECT_EQ(DirichletCharacter::trivial(12).conductor(), 1);
    for (std::int64_t p : {3, 5, 7, 11, 13}) EXPECT_EQ(teichmuller_character(p, 1).conductor(), p);
    EXPECT_EQ(parse_character("quad-23").conductor(), 23);
    EXPECT_EQ(parse_character("quad-4").conductor(), 4);
    EXPECT_EQ(DirichletCharacter::quadratic(-23).extend(23 * 9).conductor(), 23);
}

TEST(GaussSum, Examples) {
    EXPECT_TRUE(same(gauss_sum(DirichletCharacter::trivial(1)), CyclotomicNumber::rational(1)));
    auto G = gauss_sum(DirichletCharacter::quadratic(5));
    auto z = [](int k) { return CyclotomicNumber::zeta(5, k); };
    EXPECT_TRUE(same(G, z(1) + z(4) - z(2) - z(3)));
    EXPECT_TRUE(same(G * G, CyclotomicNumber::rational(5)));
}

TEST(GaussFactorization, Examples) {
    auto w = teichmuller_character(11, 1);
    auto q = DirichletCharacter::quadratic(-23);
    EXPECT_TRUE(gauss_factorization_check(q, 11));
    EXPECT_TRUE(gauss_factorization_check(w, 11));
    auto prod = w.extend(253) * q.extend(253);
    EXPECT_EQ(prod.conductor(), 253);
    EXPECT_TRUE(gauss_factorization_check(prod, 11));
    auto [cp, cq] = decompose_p_part(prod, 11);
    EXPECT_EQ(cp.modulus(), 11);
    EXPECT_EQ(cq.modulus(), 23);
    EXPECT_TRUE(same_values(cp, w, 11));
    EXPECT_TRUE(same_values(cq, q, 23));
    auto [tp, tq] = decompose_p_part(DirichletCharacter::trivial(1), 7);
    EXPECT_EQ(tp.conductor(), 1);
    EXPECT_EQ(tq.conductor(), 1);
    auto [wp, wq] = decompose_p_part(w, 11);
    EXPECT_TRUE(same_values(wp, w, 11));
    EXPECT_EQ(wq.conductor(), 1);
}

TEST(Teichmuller, CharacterValues) {
    EXPECT_TRUE(teichmuller_character(11, 0).is_trivial());
    EXPECT_TRUE(same(teichmuller_character(11, 1).value(2), CyclotomicNumber::zeta(10)));
    auto w5 = teichmuller_character(11, 5);
    for (std::int64_t a = 1; a < 11; ++a) {
        int euler = powmod(a, 5, 11) == 1 ? 1 : -1;
        EXPECT_EQ(w5.sign_value(a), euler) << a;
    }
    EXPECT_EQ(teichmuller_character(11, 1).parity(), -1);
    EXPECT_EQ(teichmuller_character(5, 2).parity(), 1);
}

TEST(Parity, Examples) {
    EXPECT_EQ(DirichletCharacter::trivial(7).parity(), 1);
    auto q = DirichletCharacter::quadratic(-23);
    EXPECT_EQ(q.parity(), -1);
    EXPECT_EQ(q.sign_value(22), -1);
    for (std::int64_t p : {3, 5, 7, 11}) EXPECT_EQ(teichmuller_character(p, 1).parity(), -1);
}

TEST(ResidualLift, Examples) {
    auto triv = ResidualCharacter::reduce(DirichletCharacter::trivial(1), 11);
    EXPECT_EQ(lift_residual_character(triv, 11).conductor(), 1);
    auto w = lift_residual_character(residual_teichmuller(11), 11);
    EXPECT_TRUE(same_values(w, teichmuller_character(11, 1), 11));
    auto q = DirichletCharacter::quadratic(-23);
    auto rq = ResidualCharacter::reduce(q, 11);
    auto lq = lift_residual_character(rq, 11);
    EXPECT_EQ(lq.conductor(), 23);
    for (std::int64_t a = 1; a < 23; ++a) EXPECT_EQ(mod(rq.value_mod_p(a) - q.sign_value(a), 11), 0) << a;
    EXPECT_TRUE(same_values(lq.primitive(), q, 23));
}

TEST(Descriptor, Parse) {
    auto chi = parse_character("mod=7;gens=3:1;ord=6");
    EXPECT_EQ(chi.modulus(), 7);
    EXPECT_TRUE(same(chi.value(3), CyclotomicNumber::zeta(6)));
    EXPECT_TRUE(same(chi.value(2), CyclotomicNumber::zeta(6, 2)));  // 2 = 3^2 mod 7
    EXPECT_EQ(chi.conductor(), 7);
    EXPECT_EQ(parse_character("teich11^3").descriptor(), teichmuller_character(11, 3).descriptor());
    EXPECT_TRUE(parse_character("triv12").is_trivial());
    EXPECT_THROW(parse_character("quadx"), std::invalid_argument);
    EXPECT_THROW(parse_character("mod=7;ord=4"), std::invalid_argument);
    EXPECT_THROW(parse_character("mod=7;gens=3:1;ord=4;foo=1"), std::invalid_argument);
}

TEST(Characters, CountAndMultiplicativity) {
    for (std::int64_t N : {5, 12, 23, 45}) {
        std::int64_t n = 1;
        for (auto [g, o] : unit_group_generators(N)) n = lcm(n, o);
        auto all = characters_mod(N, std::max<std::int64_t>(n, 1));
        EXPECT_EQ(static_cast<std::int64_t>(all.size()), euler_phi(N)) << N;
        for (auto& chi : all)
            for (std::int64_t a = 1; a < N; ++a)
                for (std::int64_t b = 1; b < N; b += 3)
                    if (gcd(a * b, N) == 1) EXPECT_TRUE(same(chi.value(a * b), chi.value(a) * chi.value(b)));
    }
}
