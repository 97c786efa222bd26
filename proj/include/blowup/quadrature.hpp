#pragma once

#include <vector>

namespace blowup {

/**
 * @brief Gauss rule for the probability measure e^{-z^2/4} dz / (2 sqrt(pi)).
 *
 * Weights sum to one; exact for polynomials of degree <= 2*order-1.
 */
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kDefaultQuadOrder = 96;
inline constexpr int kMinQuadOrder = 16;

QuadratureRule build_gauss_hermite(int order);

/// Cached, thread-safe access; the returned reference lives for the process.
const QuadratureRule& gauss_hermite(int order);

}  // namespace blowup
