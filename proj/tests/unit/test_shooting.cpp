#include <gtest/gtest.h>

#include <cmath>

#include "blowup/shooting.hpp"

using namespace blowup;

namespace {
const ModelParams kMp = make_params(3.0, 2);
}

TEST(Shooting, GammaMapIsExactBasisChange) {
  const double s0 = 20.0, delta = 0.1;
  const double I = scale_factor(s0, 2);
  const double amp = std::pow(I, -delta), beta = 1.0 / (I * I);
  const auto psi = gamma_map({0, 0, 1, 0}, s0, delta, kMp);
  EXPECT_NEAR(psi[2], amp, 1e-15);
  EXPECT_NEAR(psi[0], 2 * beta * amp, 1e-18);
  const auto psi3 = gamma_map({0, 0, 0, 1}, s0, delta, kMp);
  EXPECT_NEAR(psi3[3], amp, 1e-15);
  EXPECT_NEAR(psi3[1], 6 * beta * amp, 1e-18);
}

TEST(Shooting, ExitMapNormalisesLowModeExits) {
  ShootConfig cfg;
  cfg.dyn.linear_only = true;
  const auto r = exit_map({0.5, 0, 0, 0}, cfg, kMp);
  ASSERT_FALSE(r.survived);
  EXPECT_NEAR(std::abs(r.phi[0]), 1.0, 1e-3);
  for (int i = 1; i < 4; ++i) EXPECT_LT(std::abs(r.phi[i]), 1.0);
}

TEST(Shooting, PureLinearSearchFindsOrigin) {
  ShootConfig cfg;
  cfg.dyn.linear_only = true;
  cfg.box_center = {0.3, -0.2, 0.1, 0.05};
  cfg.box_halfwidth = 1.0;
  cfg.dyn.box = 2.0;
  const auto c = search(cfg, kMp);
  double dmax = 0;
  for (double v : c.d_star) dmax = std::max(dmax, std::abs(v));
  EXPECT_LT(dmax, 1e-6);
  EXPECT_GT(c.worst_margin, 0.0);
}

TEST(Shooting, TinyBoxAroundExitingPointFails) {
  ShootConfig cfg;
  cfg.box_center = {1.5, 0, 0, 0};
  cfg.box_halfwidth = 1e-6;
  cfg.depth = 8;
  try {
    search(cfg, kMp);
    FAIL() << "expected SearchFailure";
  } catch (const SearchFailure& e) {
    EXPECT_EQ(e.best_d.size(), 4u);
    ASSERT_TRUE(e.best_exit.has_value());
    EXPECT_EQ(e.best_exit->mode, 0);
  }
}

TEST(Shooting, EvenOnlyKeepsOddCoordinatesZero) {
  ShootConfig cfg;
  cfg.even_only = true;
  cfg.depth = 30;
  const auto c = search(cfg, kMp);
  EXPECT_EQ(c.d_star[1], 0.0);
  EXPECT_EQ(c.d_star[3], 0.0);
  EXPECT_GT(c.worst_margin, 0.0);
}

TEST(Shooting, DefaultSearchProducesSurvivor) {
  ShootConfig cfg;
  const auto c = search(cfg, kMp);
  EXPECT_GT(c.worst_margin, 0.0);
  EXPECT_LE(c.b_drift_last_half, 0.1);
  EXPECT_NEAR(c.s_final, cfg.dyn.s0 + cfg.horizon, 1e-9);
  const auto r = exit_map(c.d_star, cfg, kMp);
  EXPECT_TRUE(r.survived);
}

TEST(Shooting, SampledExitsAreDeterministicAcrossJobCounts) {
  ShootConfig cfg;
  const auto a = sample_exits(cfg, kMp, 6, 1.0, 42, 1);
  const auto b = sample_exits(cfg, kMp, 6, 1.0, 42, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].d, b[i].d);
    EXPECT_EQ(a[i].result.s_star, b[i].result.s_star);
  }
}
