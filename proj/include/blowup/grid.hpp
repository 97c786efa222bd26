#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace blowup {

/** @brief Sampled function of y on a strictly increasing node set. */
struct GridFunction {
  std::vector<double> nodes;
  std::vector<double> values;

  std::size_t size() const { return nodes.size(); }
  /// Throws DomainError when lengths differ or nodes are not increasing.
  void validate() const;
};

using ScalarFn = std::function<double(double)>;

std::vector<double> uniform_nodes(double lo, double hi, std::size_t n);
GridFunction sample(const std::vector<double>& nodes, const ScalarFn& f);
GridFunction sample_uniform(double lo, double hi, std::size_t n, const ScalarFn& f);

/// Spacing of a uniform grid; throws if the grid is not uniform to 1e-9 relative.
double uniform_spacing(const GridFunction& g);

// Fourth-order centred differences inside, five-point one-sided stencils at
// the two outermost nodes on each side. Uniform grids only, at least 5 nodes.
std::vector<double> diff1(const GridFunction& g);
std::vector<double> diff2(const GridFunction& g);

enum class OutOfRange { Zero, Clamp, Extrapolate };

/// Local six-point Lagrange interpolation on a uniform grid.
double interpolate(const GridFunction& g, double x, OutOfRange policy = OutOfRange::Zero);

double max_abs(const std::vector<double>& v);

}  // namespace blowup
