#include "property_suite.hpp"
#include "test_support.hpp"

using namespace iwr;

namespace {

void expect_clean(const props::PropertyResult& r, int min_cases) {
    EXPECT_GE(r.cases, min_cases) << r.name;
    EXPECT_EQ(r.failures, 0) << r.name << ": " << r.first_failure;
}

}  // namespace

TEST(Properties, EisensteinMultiplicativity) { expect_clean(props::eisenstein_multiplicativity(), 500); }

TEST(Properties, GaussSumNorms) { expect_clean(props::gauss_sum_norms(), 100); }

TEST(Properties, GaussFactorization) { expect_clean(props::gauss_factorization(), 100); }

TEST(Properties, MuLambdaAdditivity) { expect_clean(props::mu_lambda_additivity(), 200); }

TEST(Properties, TwistUntwistDepletion) { expect_clean(props::twist_untwist_depletion(), 50); }

TEST(Properties, PathIndependence) { expect_clean(props::path_independence(iwr::testing::cache_dir()), 100); }
