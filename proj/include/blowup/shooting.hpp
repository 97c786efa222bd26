#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blowup/dynamics.hpp"
#include "blowup/errors.hpp"

namespace blowup {

struct ShootConfig {
  DynamicsConfig dyn;
  double horizon = 10.0;        ///< survival horizon S
  double box_halfwidth = 2.0;
  std::vector<double> box_center;  ///< empty means the origin
  int depth = 40;               ///< halvings allowed per coordinate
  bool even_only = false;       ///< freeze odd coordinates at zero
  bool refine = true;           ///< keep bisecting survivors until every coordinate hits depth
  int polish_iterations = 6;    ///< Newton steps on the horizon modes after bisection; 0 disables
};

/// H-coefficients psi_0..psi_{2k-1} of the initial datum.
std::vector<double> gamma_map(const std::vector<double>& d, double s0, double delta,
                              const ModelParams& mp);

struct ExitMapResult {
  bool survived = false;
  double s_star = 0;
  std::vector<double> phi;  ///< I^delta(s*) (q_0..q_{2k-1})(s*), empty on survival
  std::optional<ExitInfo> exit;
  TrajectoryRecord trajectory;
};

ExitMapResult exit_map(const std::vector<double>& d, const ShootConfig& cfg, const ModelParams& mp);

struct Bracket {
  double lo = 0, hi = 0;
  int halvings = 0;
};

struct ShootStep {
  std::vector<double> d;
  bool survived = false;
  int bound = kNoExit;
  int omega = 0;
  double s_star = 0;
};

struct Certificate {
  std::vector<double> d_star;
  double s0 = 0;
  double horizon = 0;
  double s_final = 0;
  double b_final = 0;
  double b_drift_last_half = 0;  ///< |b(s0+S) - b(s0+S/2)|
  std::vector<BoundMargin> final_margins;
  double worst_margin = 0;
  std::vector<Bracket> brackets;
  int trajectories = 0;
  int max_halvings = 0;
  double horizon_residual = 0;  ///< I^delta max_m |q_m| at the horizon over the shooting modes
  int polish_steps = 0;         ///< accepted Newton steps
  std::vector<ShootStep> history;
};

/// No survivor within the configured depth; carries the longest-lived candidate.
struct SearchFailure : NumericalError {
  std::vector<double> best_d;
  std::optional<ExitInfo> best_exit;
  SearchFailure(const std::string& msg, std::vector<double> d, std::optional<ExitInfo> ex)
      : NumericalError(msg), best_d(std::move(d)), best_exit(std::move(ex)) {}
};

/// Exit-mode bisection over the box.
Certificate search(const ShootConfig& cfg, const ModelParams& mp);

/// Margins of a recorded sample against the shrinking set.
std::vector<BoundMargin> sample_margins(const TrajectorySample& smp, double delta, double b0,
                                        const ModelParams& mp);

struct ExitSample {
  std::vector<double> d;
  ExitMapResult result;
  std::string breakdown;  ///< non-empty when the modulation equation degenerated before any exit
};

/// Exit data for n random d drawn uniformly from [-radius, radius]^{2k}.
std::vector<ExitSample> sample_exits(const ShootConfig& cfg, const ModelParams& mp, int n,
                                     double radius, std::uint64_t seed, int jobs = 1);

}  // namespace blowup
