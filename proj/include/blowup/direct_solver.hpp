#pragma once

#include <string>
#include <vector>

#include "blowup/grid.hpp"
#include "blowup/profile.hpp"

namespace blowup {

enum class Frame { Physical, SelfSimilar };
enum class Termination { Horizon, BlowupThreshold, Instability };

const char* to_string(Termination t);
const char* to_string(Frame f);

struct Snapshot {
  long double time = 0;  ///< t in the physical frame, s in the self-similar frame
  GridFunction field;
};

struct NormSample {
  long double time = 0;
  double sup = 0;
};

struct PdeRun {
  Frame frame = Frame::Physical;
  double domain_lo = 0, domain_hi = 0;
  std::size_t nodes = 0;
  std::string boundary;  ///< "dirichlet" or "outflow"
  std::vector<Snapshot> snapshots;
  std::vector<NormSample> history;
  Termination termination = Termination::Horizon;
  std::string message;
  double wall_gradient = 0;  ///< max |u_x| at the walls over the run (physical frame)
};

struct WSolverConfig {
  double ds = 0.002;
  int snapshot_every = 50;   ///< steps between snapshots
  double max_transport_cfl = 1.0;
  double max_diffusion_number = 0.4;
};

/// Fifth-order upwinded transport, fourth-order diffusion, RK4, outflow extrapolation at both ends.
PdeRun solve_w_direct(const GridFunction& w0, double s_start, double s_end, const ModelParams& mp,
                      const WSolverConfig& cfg = {});

struct USolverConfig {
  double safety = 0.05;          ///< dt <= safety * |u|_inf^{-(p-1)}
  double diffusion_number = 0.4; ///< dt <= diffusion_number * h^2
  double threshold = 1e8;
  double snapshot_growth = 1.1;  ///< snapshot whenever |u|_inf grows by this factor
  long snapshot_every = 2000;    ///< and at least this often (steps)
  long max_steps = 20'000'000;
};

/// Method of lines with homogeneous Dirichlet walls and an adaptive RK4 step.
PdeRun solve_u_physical(const GridFunction& u0, double t_max, const ModelParams& mp,
                        const USolverConfig& cfg = {});

struct BlowupEstimate {
  long double T_hat = 0;
  double residual = 0;     ///< RMS of t + |u|^{-(p-1)}/(p-1) - T_hat over the window
  double free_slope = 0;   ///< slope of |u|^{-(p-1)} against t (ideal -(p-1))
  int points = 0;
};

/// Fits |u|^{-(p-1)} = (p-1)(T_hat - t) over the last decade of growth.
BlowupEstimate estimate_blowup_time(const PdeRun& run, const ModelParams& mp);

struct ProfileFit {
  double b = 0;
  bool flat = false;
  double rms = 0;
  int points = 0;
};

/// Least-squares b for self-similar data (y, w) over |y| <= y_fit.
ProfileFit fit_profile_b_selfsimilar(const GridFunction& w, double y_fit, const ModelParams& mp);

/// Rescales a physical snapshot taken at time t < T_hat, then fits b.
ProfileFit fit_profile_b(const GridFunction& snapshot, long double t, long double T_hat,
                         const ModelParams& mp, double y_fit);

/// Self-similar view of a snapshot; identity for self-similar runs.
GridFunction rescale_snapshot(const Snapshot& snap, Frame frame, long double T_hat,
                              const ModelParams& mp);

struct ComparePoint {
  long double time = 0;
  double tau = 0;  ///< T_hat - t, or e^{-s}
  double distance = 0;
  double b = 0;
  bool flat = false;
};

struct ComparisonReport {
  std::vector<ComparePoint> points;
  double loglog_slope = 0;  ///< d log(distance) / d log(tau)
};

/// Default fit window 2 b0^{-1/2k}.
double default_fit_window(double b0, const ModelParams& mp);

ComparisonReport compare_profile(const PdeRun& run, long double T_hat, const ModelParams& mp,
                                 double y_fit);

}  // namespace blowup
