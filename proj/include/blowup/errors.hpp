#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace blowup {

/** @brief Precondition on model or call parameters violated. */
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** @brief Non-finite values, CFL violation or similar integration failure. */
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** @brief The b' solve hit a near-singular denominator. */
struct ModulationBreakdown : NumericalError {
  double denominator;
  ModulationBreakdown(const std::string& msg, double denom)
      : NumericalError(msg), denominator(denom) {}
};

/** @brief Invalid or unknown configuration entry. */
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace blowup
