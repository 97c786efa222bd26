#include <gtest/gtest.h>

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/hermite.hpp"
#include "blowup/mehler.hpp"
#include "blowup/verification.hpp"

using namespace blowup;

TEST(Mehler, SuiteWithinTolerances) {
  for (double sigma : {2.0, 10.0}) {
    const auto rep = mehler_suite(2, sigma, {0.1, 0.5, 1.0, 2.0, 3.0}, 8);
    EXPECT_LT(rep.multiplier, 1e-5);
    EXPECT_LT(rep.semigroup, 1e-4);
    EXPECT_LT(rep.mass, 1e-8);
  }
  const auto rep3 = mehler_suite(3, 4.0, {0.5, 2.0}, 8);
  EXPECT_LT(rep3.multiplier, 1e-5);
}

TEST(Mehler, IdentityBelowGap) {
  const ScalarFn f = [](double y) { return std::sin(y); };
  const auto g = propagate(f, 3.0, 3.0 + 0.5 * kMehlerIdentityGap, 2);
  EXPECT_EQ(g(0.4), f(0.4));
}

TEST(Mehler, RejectsBackwardTime) {
  EXPECT_THROW(kernel_eval(0, 0, 1.0, 1.0, 2), DomainError);
  EXPECT_THROW(propagate([](double) { return 1.0; }, 2.0, 1.0, 2), DomainError);
}

TEST(Mehler, ConstantsGrowLikeTheLeadingMode) {
  const auto g = propagate([](double) { return 1.0; }, 1.0, 2.5, 2);
  EXPECT_NEAR(g(0.7), std::exp(1.5), 1e-12);
  EXPECT_NEAR(mode_multiplier(4, 1.0, 2.5, 2), 1.0, 1e-15);
  EXPECT_NEAR(mode_multiplier(6, 0.0, 2.0, 2), std::exp(-1.0), 1e-15);
}

TEST(Mehler, RemainderContraction) {
  const auto mp = make_params(3.0, 2);
  const auto rep = contraction_study(mp, 6.0, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
  EXPECT_GE(rep.exponent, 0.4);
  for (std::size_t i = 1; i < rep.ratios.size(); ++i) EXPECT_LT(rep.ratios[i], rep.ratios[i - 1]);
}
