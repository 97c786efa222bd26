#include <gtest/gtest.h>

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/quadrature.hpp"

using namespace blowup;

// Moments of the probability measure e^{-z^2/4}/(2 sqrt(pi)) are (2m-1)!! 2^m.
TEST(Quadrature, EvenMomentsOfTheWeight) {
  const auto& q = gauss_hermite(kDefaultQuadOrder);
  const double expected[] = {1.0, 2.0, 12.0, 120.0, 1680.0};
  for (int m = 0; m < 5; ++m) {
    double acc = 0;
    for (int i = 0; i < q.order; ++i) acc += q.weights[i] * std::pow(q.nodes[i], 2 * m);
    EXPECT_NEAR(acc / expected[m], 1.0, 1e-13) << m;
  }
}

TEST(Quadrature, OddMomentsVanishAndNodesSymmetric) {
  for (int order : {16, 33, 96}) {
    const auto q = build_gauss_hermite(order);
    double acc = 0;
    for (int i = 0; i < q.order; ++i) {
      acc += q.weights[i] * std::pow(q.nodes[i], 3);
      EXPECT_NEAR(q.nodes[i], -q.nodes[q.order - 1 - i], 1e-12);
    }
    EXPECT_NEAR(acc, 0.0, 1e-12);
  }
}

TEST(Quadrature, ExactForGaussianIntegrand) {
  // E[cos(z)] = e^{-1} under variance 2
  const auto& q = gauss_hermite(64);
  double acc = 0;
  for (int i = 0; i < q.order; ++i) acc += q.weights[i] * std::cos(q.nodes[i]);
  EXPECT_NEAR(acc, std::exp(-1.0), 1e-14);
}

TEST(Quadrature, RejectsEmptyRule) { EXPECT_THROW(build_gauss_hermite(0), DomainError); }
