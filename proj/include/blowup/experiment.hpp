#pragma once

#include <ostream>
#include <string>

#include "blowup/io.hpp"

namespace blowup {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitAcceptance = 4;

/// verify-spectral | simulate | shoot | direct | compare. Writes artifacts and a manifest
/// under output_dir/<subcommand>/ and returns the process exit code.
int run_experiment(const std::string& subcommand, const RunConfig& cfg, std::ostream& log);

}  // namespace blowup
