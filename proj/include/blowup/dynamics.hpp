#pragma once

#include <optional>
#include <vector>

#include "blowup/hermite.hpp"
#include "blowup/operators.hpp"
#include "blowup/profile.hpp"

namespace blowup {

struct DynamicsConfig {
  double delta = 0.1;
  double b0 = 1.0;
  double s0 = 20.0;
  double ds = 0.01;
  double y_max = 0.5;    ///< remainder grid half-width
  int nodes = 401;       ///< remainder grid size
  int tail_degree = 0;   ///< highest tracked H-index; 0 selects max(32, M_floor + 24)
  bool linear_only = false;  ///< test mode: only L_s acts, b' = 0
  OperatorOptions ops;
  double hysteresis = 1e-12;
  double box = 2.0;  ///< admissible max|d_i|
  int record_every = 1;
};

int tail_degree(const DynamicsConfig& cfg, const ModelParams& mp);

/** @brief (s, b, q) with q kept in extended Hermite coefficients. */
struct SimState {
  double s = 0;
  double b = 0;
  SpectralDecomposition dec;
};

// Bound identifiers; non-negative values are mode indices.
inline constexpr int kNoExit = -1;
inline constexpr int kRemainderBound = -2;
inline constexpr int kBLowerBound = -3;
inline constexpr int kBUpperBound = -4;

struct BoundMargin {
  int bound = 0;
  double margin = 0;  ///< positive inside
};

struct MembershipReport {
  bool inside = true;
  std::vector<BoundMargin> violations;
  double worst_margin = 0;
  std::vector<BoundMargin> margins;  ///< every bound in identifier order
};

struct TrajectorySample {
  double s = 0, b = 0, bprime = 0;
  std::vector<double> modes;
  double qminus = 0;
  bool inside = true;
  int exit_mode = kNoExit;
};

struct ExitInfo {
  double s_star = 0;
  int mode = kNoExit;  ///< bound identifier
  int omega = 0;       ///< sign of the exiting quantity
  double rate = 0;     ///< d/ds of that quantity at the exit
  bool transversal = false;
  std::vector<double> modes;  ///< q_0..q_{M_floor} at s_star
  double b = 0;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  std::optional<ExitInfo> exit;
};

/// Derivatives of all tracked coefficients and of b.
struct ModalRates {
  std::vector<double> rates;
  double bprime = 0;
};
ModalRates modal_rates(const std::vector<double>& coeffs, double b, double s, const ModelParams& mp,
                       const DynamicsConfig& cfg);

/// Initial datum sum_i d_i I^{-delta}(s0) y^i, i < 2k.
SimState init_state(const std::vector<double>& d, const DynamicsConfig& cfg, const ModelParams& mp);
/// State from raw H-coefficients (used by tests and the CLI).
SimState make_state(double s, double b, std::vector<double> coeffs, const DynamicsConfig& cfg,
                    const ModelParams& mp);

/// One RK4 step followed by removal of the q_{2k} drift.
SimState step(const SimState& st, double ds, const ModelParams& mp, const DynamicsConfig& cfg);

MembershipReport membership(const SimState& st, double delta, double b0, const ModelParams& mp,
                            double hysteresis = 1e-12);

TrajectoryRecord run(const SimState& st0, double s_max, const ModelParams& mp,
                     const DynamicsConfig& cfg);

struct AprioriReport {
  double C1 = 0;  ///< max |q_j' - (1 - j/2k) q_j| I^{2 delta}
  double C2 = 0;  ///< max |b'| I^{delta}
  double C3 = 0;  ///< max |q_-|_s over its contraction envelope
  std::vector<double> C1_by_mode;
  int samples_used = 0;
};

/// Uses in-set samples with s <= s_end.
AprioriReport a_priori_diagnostics(const TrajectoryRecord& traj, double delta,
                                   const ModelParams& mp, double s_end = 1e300);

}  // namespace blowup
