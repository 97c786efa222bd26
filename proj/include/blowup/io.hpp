#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blowup/dynamics.hpp"
#include "blowup/direct_solver.hpp"
#include "blowup/shooting.hpp"

namespace blowup {

/** @brief Every tunable of a CLI run; one JSON object per file. */
struct RunConfig {
  // model
  double p = 3.0;
  int k = 2;
  double b0 = 1.0;
  double delta = 0.1;
  // dynamics
  double s0 = 20.0;
  double ds = 0.01;
  double horizon = 10.0;
  double y_max = 0.5;
  int nodes = 401;
  int quad_order = 96;
  int tail_degree = 0;
  bool linear_only = false;
  std::string residual_form = "derived";
  std::string modulation_form = "derived";
  std::vector<double> d;  ///< simulate: shooting parameters (empty means zeros)
  // shooting
  double box_halfwidth = 2.0;
  std::vector<double> box_center;
  int depth = 40;
  bool even_only = false;
  int polish_iterations = 6;
  // direct solvers
  std::string direct_initial = "survivor";  ///< survivor | constant | profile | bump
  double w_domain = 2.5;
  int w_nodes = 2001;
  double w_ds = 0.002;
  double w_span = 12.0;
  double u_domain = 10.0;
  int u_nodes = 401;
  double u_t_max = 1.0;
  double u_safety = 0.05;
  double u_threshold = 1e8;
  double blowup_time = 0.1;   ///< reference T for constant/profile data
  double bump_amplitude = 0.5;
  double fit_window = 0.0;    ///< 0 selects 2 b0^{-1/2k}
  // plumbing
  std::string output_dir = "out";
  std::string survivor_manifest;  ///< shoot manifest consumed by direct/compare
  std::uint64_t seed = 1;
  int jobs = 1;
};

/// Names of all accepted keys, in documentation order.
std::vector<std::string> config_keys();

/// Throws ConfigError naming the offending line for parse errors and unknown keys.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

/// Sets one key from a JSON literal or a bare string; throws ConfigError.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

/// Range checks; throws ConfigError.
void validate(const RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);

ModelParams model_params(const RunConfig& cfg);
DynamicsConfig dynamics_config(const RunConfig& cfg);
ShootConfig shoot_config(const RunConfig& cfg);

// Serialization. Numbers in CSV use %.17g; JSON doubles round-trip exactly.

std::string trajectory_csv(const TrajectoryRecord& rec, int M_floor);
void write_trajectory_csv(const TrajectoryRecord& rec, int M_floor, const std::string& path);

std::string certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const std::string& text);
void save_certificate(const Certificate& c, const std::string& path);
Certificate load_certificate(const std::string& path);
bool operator==(const Certificate& a, const Certificate& b);

/// Writes a text file; throws std::runtime_error when the path is not writable.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

struct Manifest {
  std::string subcommand;
  std::string config_json;
  std::string version;
  std::uint64_t seed = 0;
  double wall_time = 0;
  int exit_code = 0;
  std::string status;
  std::map<std::string, std::string> artifacts;  ///< name -> path
  std::string summary_json = "{}";
};

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace blowup
