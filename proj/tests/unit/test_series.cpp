#include <gtest/gtest.h>

#include <cmath>

#include "blowup/series.hpp"

using namespace blowup;

TEST(Series, ProductAndDerivative) {
  const series::Series a = {1, 2, 3}, b = {0, 1, -1};
  const auto c = series::mul(a, b, 4);
  const std::vector<double> expect = {0, 1, 1, 1, -3};
  for (int i = 0; i <= 4; ++i) EXPECT_DOUBLE_EQ(c[i], expect[i]);
  const auto d = series::derivative(a);
  EXPECT_DOUBLE_EQ(d[0], 2);
  EXPECT_DOUBLE_EQ(d[1], 6);
}

// Taylor coefficients of (1+x)^p are binomial numbers.
TEST(Series, SignedPowerMatchesBinomialSeries) {
  for (double p : {-0.5, 2.0, 3.0, 1.7}) {
    const auto g = series::signed_power({1.0, 1.0}, p, 10);
    double binom = 1.0;
    for (int n = 0; n <= 10; ++n) {
      EXPECT_NEAR(g[n], binom, 1e-12 * std::max(1.0, std::abs(binom))) << p << " " << n;
      binom *= (p - n) / (n + 1);
    }
  }
}

TEST(Series, SignedPowerOfNegativeSeries) {
  // sign(a)|a|^3 = a^3 for a = -2 + x
  const auto g = series::signed_power({-2.0, 1.0}, 3.0, 4);
  const std::vector<double> expect = {-8, 12, -6, 1, 0};
  for (int i = 0; i <= 4; ++i) EXPECT_NEAR(g[i], expect[i], 1e-12);
}

TEST(Series, ShiftTruncates) {
  const auto s = series::shift({1, 2, 3}, 2, 3);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s[2], 1);
  EXPECT_DOUBLE_EQ(s[3], 2);
}
