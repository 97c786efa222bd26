#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blowup/dynamics.hpp"
#include "blowup/errors.hpp"
#include "blowup/hermite.hpp"
#include "blowup/operators.hpp"
#include "blowup/verification.hpp"

using namespace blowup;

namespace {

const ModelParams kMp = make_params(3.0, 2);

// P_4 of the q = 0 residual term, by a trapezoid rule in z = I y; independent of the
// Gauss rule and of the series path.
double oracle_p4_residual(double s, double b) {
  const double I = scale_factor(s, 2);
  const double beta = 1.0 / (I * I);
  const double a1 = -2.0 * 2 * 3 * b / 2.0;       // -2k(2k-1)b/(p-1)
  const double a2 = 4.0 * 3 * 4 * b * b / 4.0;     // 4pk^2 b^2/(p-1)^2
  const int n = 20000;
  const double zmax = 40.0, h = 2 * zmax / n;
  double num = 0;
  for (int i = 0; i <= n; ++i) {
    const double z = -zmax + i * h;
    const double y = z / I;
    const double e = 1.0 / (2.0 + b * std::pow(y, 4));
    const double r = beta * y * y * (a1 + a2 * std::pow(y, 4) * e);
    const double h4 = std::pow(y, 4) - 12 * beta * y * y + 12 * beta * beta;
    const double wgt = std::exp(-z * z / 4) / (2 * std::sqrt(M_PI));
    num += (i == 0 || i == n ? 0.5 : 1.0) * r * h4 * wgt;
  }
  num *= h;
  return num / (std::pow(beta, 4) * 16 * 24);
}

}  // namespace

TEST(Operators, NonlinearTermIsQuadraticAndContinuous) {
  EXPECT_EQ(nonlinear_point(0.0, 0.5, 3.0), 0.0);
  for (double x : {0.0499999, 0.0500001}) {
    const double q = x / 0.5;
    const double direct = std::pow(1 + x, 3) - 1 - 3 * x;
    EXPECT_NEAR(nonlinear_point(q, 0.5, 3.0), direct, 1e-15);
  }
  EXPECT_NEAR(nonlinear_point(1e-4, 0.5, 3.0) / (1e-4 * 1e-4), 3.0 * 0.25, 1e-3);
}

TEST(Operators, ResidualAtZeroState) {
  const double b = 1.0, beta = 1e-3;
  for (double y : {0.3, 1.0, 1.7}) {
    const double e = 1.0 / (2 + std::pow(y, 4));
    const double expected = beta * y * y * (-6 + 12 * std::pow(y, 4) * e);
    EXPECT_NEAR(residual_point(0.0, y, b, beta, kMp, CoefficientForm::Derived), expected, 1e-15);
  }
}

TEST(Operators, LinearOperatorActsAsJordanBlockOnGrid) {
  const double s = 2.0;
  const double beta = std::pow(scale_factor(s, 2), -2.0);
  for (int m = 0; m <= 6; ++m) {
    const auto hm = sample_uniform(-1.5, 1.5, 1201, [&](double y) { return eval_scaled_hermite(m, y, s, 2); });
    const auto ls = apply_Ls(hm, s, kMp);
    for (std::size_t i = 4; i + 4 < hm.size(); i += 97) {
      const double y = hm.nodes[i];
      double expected = (1 - m / 4.0) * hm.values[i];
      if (m >= 2) expected += m * (m - 1) * 0.5 * beta * eval_scaled_hermite(m - 2, y, s, 2);
      EXPECT_NEAR(ls.values[i], expected, 1e-8) << m;
    }
  }
}

TEST(Operators, ModalLinearOperator) {
  const std::vector<double> c = {0, 0, 0, 0, 1.0};
  const auto r = apply_Ls_modal(c, 8.0, 2);
  const double beta = std::pow(scale_factor(8.0, 2), -2.0);
  EXPECT_NEAR(r[4], 0.0, 1e-15);
  EXPECT_NEAR(r[2], 12 * 0.5 * beta, 1e-15);
}

// b' at q = 0 equals -P_4 R / P_4 M, with P_4 M = 1/(p-1) (derived) or p/(p-1) (stated).
TEST(Operators, ModulationSpeedAtZeroStateMatchesOracle) {
  const double s = 20.0, b = 1.0;
  const double p4r = oracle_p4_residual(s, b);
  DynamicsConfig cfg;
  const SimState st = make_state(s, b, std::vector<double>(40, 0.0), cfg, kMp);
  const double derived = solve_bprime(st.dec, b, s, kMp);
  EXPECT_NEAR(derived / (-2.0 * p4r), 1.0, 1e-8);
  OperatorOptions stated;
  stated.modulation = CoefficientForm::Stated;
  const double alt = solve_bprime(st.dec, b, s, kMp, stated);
  EXPECT_NEAR(alt / (-(2.0 / 3.0) * p4r), 1.0, 1e-8);
  // frozen from the oracle above
  EXPECT_NEAR(derived, -7.42015e-7, 5e-11);
}

TEST(Operators, SeriesAndQuadratureProjectionsAgree) {
  const double s = 12.0, b = 1.1;
  const double beta = std::pow(scale_factor(s, 2), -2.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<double> c(12);
  for (double& x : c) x = u(rng);
  c[4] = 0;
  const auto mono = hermite_to_monomial(c, beta);
  const ScalarFn q = [&](double y) {
    double v = 0;
    for (auto it = mono.rbegin(); it != mono.rend(); ++it) v = v * y + *it;
    return v;
  };
  const ScalarFn dq = [&](double y) {
    double v = 0;
    for (int j = static_cast<int>(mono.size()) - 1; j >= 1; --j) v = v * y + j * mono[j];
    return v;
  };
  ASSERT_TRUE(series_valid(b, s, kMp));
  const auto ser = project_terms_series(c, b, s, 8, kMp);
  const auto quad = project_terms_quadrature(q, dq, b, s, 8, kMp);
  auto rel = [](const std::vector<double>& a, const std::vector<double>& b2, int m, double scale) {
    return std::abs(a[m] - b2[m]) / scale;
  };
  for (int m = 0; m <= 8; ++m) {
    const double scale = std::pow(beta, 0.5 * m);  // natural size of P_m of an O(1) function
    EXPECT_LT(rel(ser.nonlinear, quad.nonlinear, m, 1.0) * scale, 1e-9) << m;
    EXPECT_LT(std::abs(ser.drift[m] - quad.drift[m]) * scale, 1e-9) << m;
    EXPECT_LT(std::abs(ser.residual[m] - quad.residual[m]) * scale, 1e-9) << m;
    EXPECT_LT(std::abs(ser.modulation[m] - quad.modulation[m]) * scale, 1e-9) << m;
  }
}

TEST(Operators, ModulationBreakdownNearSingularDenominator) {
  // 1 + p P_4(y^4 e_b q) vanishes near q = -2/3 constant
  DynamicsConfig cfg;
  std::vector<double> c(40, 0.0);
  c[0] = -2.0 / 3.0;
  const SimState st = make_state(20.0, 1.0, c, cfg, kMp);
  EXPECT_THROW(solve_bprime(st.dec, 1.0, 20.0, kMp), ModulationBreakdown);
}

// Chain-rule consistency between the q-equation and the w-equation.
TEST(Operators, DerivedCoefficientsAreConsistent) {
  const auto rep = consistency_suite(kMp, 4, 4096, 2.0, 1.0, 0.0, {}, 17);
  EXPECT_LT(rep.max_residual, 1e-6);
  EXPECT_GE(rep.min_ratio, 3.5);
  const auto moving = consistency_suite(kMp, 3, 2048, 2.0, 1.0, 0.3, {}, 18);
  EXPECT_LT(moving.max_residual, 1e-6);
}

TEST(Operators, StatedCoefficientsLeaveOrderOneResiduals) {
  OperatorOptions res;
  res.residual = CoefficientForm::Stated;
  EXPECT_GT(consistency_suite(kMp, 2, 1024, 2.0, 1.0, 0.0, res, 17).max_residual, 1e-2);
  OperatorOptions mod;
  mod.modulation = CoefficientForm::Stated;
  EXPECT_GT(consistency_suite(kMp, 2, 1024, 2.0, 1.0, 0.3, mod, 17).max_residual, 1e-2);
}
