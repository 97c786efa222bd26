#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blowup/errors.hpp"
#include "blowup/grid.hpp"

using namespace blowup;

TEST(Grid, ValidateRejectsMismatchAndDisorder) {
  GridFunction g{{0.0, 1.0, 2.0}, {1.0, 2.0}};
  EXPECT_THROW(g.validate(), DomainError);
  GridFunction h{{0.0, 2.0, 1.0}, {1.0, 2.0, 3.0}};
  EXPECT_THROW(h.validate(), DomainError);
}

TEST(Grid, DerivativesExactOnQuartics) {
  const auto g = sample_uniform(-1.0, 2.0, 31, [](double x) { return 3 - x + 2 * x * x - x * x * x + 0.5 * x * x * x * x; });
  const auto d1 = diff1(g);
  const auto d2 = diff2(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.nodes[i];
    EXPECT_NEAR(d1[i], -1 + 4 * x - 3 * x * x + 2 * x * x * x, 1e-10) << i;
    EXPECT_NEAR(d2[i], 4 - 6 * x + 6 * x * x, 1e-8) << i;
  }
}

TEST(Grid, FourthOrderConvergenceOnSmoothData) {
  auto err = [](int n) {
    const auto g = sample_uniform(0.0, 1.0, n, [](double x) { return std::sin(3 * x); });
    const auto d2 = diff2(g);
    double e = 0;
    for (std::size_t i = 2; i + 2 < g.size(); ++i)
      e = std::max(e, std::abs(d2[i] + 9 * std::sin(3 * g.nodes[i])));
    return e;
  };
  EXPECT_GT(err(41) / err(81), 12.0);
}

TEST(Grid, InterpolationExactForQuintics) {
  const auto poly = [](double x) { return 1 + x - x * x * x + 0.25 * std::pow(x, 5); };
  const auto g = sample_uniform(-2.0, 2.0, 41, poly);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(interpolate(g, x), poly(x), 1e-11);
  }
}

TEST(Grid, OutOfRangePolicies) {
  const auto g = sample_uniform(0.0, 1.0, 11, [](double x) { return 2 * x + 1; });
  EXPECT_EQ(interpolate(g, 1.5, OutOfRange::Zero), 0.0);
  EXPECT_DOUBLE_EQ(interpolate(g, 1.5, OutOfRange::Clamp), 3.0);
  EXPECT_NEAR(interpolate(g, 1.5, OutOfRange::Extrapolate), 4.0, 1e-12);
}

TEST(Grid, NonUniformRejected) {
  GridFunction g{{0.0, 0.1, 0.3, 0.4, 0.5, 0.6}, {0, 0, 0, 0, 0, 0}};
  EXPECT_THROW(uniform_spacing(g), DomainError);
}
