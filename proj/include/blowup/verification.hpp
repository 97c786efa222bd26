#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blowup/operators.hpp"
#include "blowup/profile.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

// Identity suites shared by the CLI and the acceptance binary.

struct SpectralReport {
  double orthogonality = 0;  ///< max |<H_n,H_m> - norm delta| / sqrt(norm_n norm_m)
  double jordan = 0;         ///< max relative L^2 error of L_s H_m against its Jordan form
  double product = 0;        ///< max relative L^2 error of the y^l H_n closed forms
  int checks = 0;
};

SpectralReport spectral_suite(const std::vector<int>& ks, const std::vector<double>& ss, int nmax,
                              int max_product_power = 2, int order = kDefaultQuadOrder);

struct MehlerReport {
  double multiplier = 0;   ///< max relative L^2_{rho_s} error of K H_n against e^{tau(1-n/2k)} H_n
  double semigroup = 0;    ///< max relative error of K_{s,t} K_{t,sigma} against K_{s,sigma}
  double mass = 0;         ///< max |int K dz - e^{s-sigma}| / e^{s-sigma}
};

MehlerReport mehler_suite(int k, double sigma, const std::vector<double>& gaps, int nmax,
                          int order = kDefaultQuadOrder);

struct ConsistencySample {
  double residual = 0;         ///< at the requested node count
  double residual_coarse = 0;  ///< at the refinement base
  double residual_fine = 0;    ///< at twice the refinement base
};

struct ConsistencyReportSuite {
  std::vector<ConsistencySample> samples;
  double max_residual = 0;
  double min_ratio = 0;  ///< min over samples of residual_coarse / residual_fine
};

/// Random smooth states on [-domain, domain]; b frozen unless bprime != 0. The grid-doubling
/// ratio is taken at refine_base -> 2 refine_base, where truncation dominates rounding.
ConsistencyReportSuite consistency_suite(const ModelParams& mp, int states, int nodes, double s,
                                         double b, double bprime, const OperatorOptions& opt,
                                         std::uint64_t seed, double domain = 2.0,
                                         int refine_base = 256);

struct ContractionReport {
  std::vector<double> gaps;
  std::vector<double> ratios;  ///< |K q_-|_tau / |q_-|_sigma
  double exponent = 0;         ///< fitted decay rate of the ratios
};

/// Remainder of a Gaussian bump pushed through the Mehler kernel.
ContractionReport contraction_study(const ModelParams& mp, double sigma,
                                    const std::vector<double>& gaps, double y_max = 2.0,
                                    int nodes = 401);

}  // namespace blowup

namespace blowup {

struct ManufacturedReport {
  double max_distance = 0;
  double max_b_error = 0;
  int snapshots = 0;
};

/// Exact self-similar solution sampled on a fixed x-grid and pushed through compare_profile.
ManufacturedReport manufactured_check(const ModelParams& mp, double b_star, double T,
                                      int snapshots = 24, double x_max = 2.0, int nodes = 4001);

struct TrendConfig {
  double b0 = 1.0;
  double s0 = 20.0;
  double delta = 0.1;
  double span = 12.0;     ///< w-run length in s
  double domain = 2.5;    ///< y half-width
  int nodes = 2001;
  double ds = 0.002;
  double sample_every = 0.05;  ///< snapshot spacing in s
  double fit_window = 2.0;
  double monotone_slack = 1e-6;  ///< relative rise tolerated between consecutive distances
};

struct TrendReport {
  std::vector<double> s, distance, b;
  bool distance_nonincreasing = false;  ///< over the last half of the run
  std::vector<double> b_increments;     ///< over the four last dyadic windows in T - t
  bool increments_shrinking = false;
  std::string termination;
};

/// w-run seeded with f_b0 (1 + e_b0 psi(d*)).
TrendReport survivor_trend(const std::vector<double>& d_star, const ModelParams& mp,
                           const TrendConfig& cfg);

struct BlowupTimeReport {
  long double T_hat = 0;
  double relative_error = 0;
  bool deterministic = false;
  double residual = 0;
};

/// Space-independent data kappa T^{-1/(p-1)}; runs twice to check determinism.
BlowupTimeReport blowup_time_check(const ModelParams& mp, double T, double threshold = 1e8,
                                   double domain = 10.0, int nodes = 401);

}  // namespace blowup
