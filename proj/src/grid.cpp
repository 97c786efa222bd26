#include "blowup/grid.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

void GridFunction::validate() const {
  if (nodes.size() != values.size()) throw DomainError("grid: nodes/values length mismatch");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1])) throw DomainError("grid: nodes not strictly increasing");
}

std::vector<double> uniform_nodes(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("uniform_nodes: need n >= 2 and hi > lo");
  std::vector<double> x(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + h * static_cast<double>(i);
  x[n - 1] = hi;
  return x;
}

GridFunction sample(const std::vector<double>& nodes, const ScalarFn& f) {
  GridFunction g{nodes, std::vector<double>(nodes.size())};
  for (std::size_t i = 0; i < nodes.size(); ++i) g.values[i] = f(nodes[i]);
  return g;
}

GridFunction sample_uniform(double lo, double hi, std::size_t n, const ScalarFn& f) {
  return sample(uniform_nodes(lo, hi, n), f);
}

double uniform_spacing(const GridFunction& g) {
  if (g.size() < 2) throw DomainError("grid: fewer than 2 nodes");
  const double h = (g.nodes.back() - g.nodes.front()) / static_cast<double>(g.size() - 1);
  for (std::size_t i = 1; i < g.size(); ++i)
    if (std::abs(g.nodes[i] - g.nodes[i - 1] - h) > 1e-9 * h)
      throw DomainError("grid: finite differences need a uniform grid");
  return h;
}

namespace {
void require_stencil(const GridFunction& g) {
  if (g.size() < 5) throw DomainError("grid: at least 5 nodes required for differences");
  if (g.values.size() != g.nodes.size()) throw DomainError("grid: nodes/values length mismatch");
}
}  // namespace

std::vector<double> diff1(const GridFunction& g) {
  require_stencil(g);
  const double h = uniform_spacing(g);
  const auto& f = g.values;
  const std::size_t n = f.size();
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
  const std::size_t m = n - 1;
  d[m] = -(-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]) * c;
  d[m - 1] = -(-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]) * c;
  return d;
}

std::vector<double> diff2(const GridFunction& g) {
  require_stencil(g);
  const double h = uniform_spacing(g);
  const auto& f = g.values;
  const std::size_t n = f.size();
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * c;
  d[0] = (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) * c;
  d[1] = (11.0 * f[0] - 20.0 * f[1] + 6.0 * f[2] + 4.0 * f[3] - f[4]) * c;
  const std::size_t m = n - 1;
  d[m] = (35.0 * f[m] - 104.0 * f[m - 1] + 114.0 * f[m - 2] - 56.0 * f[m - 3] + 11.0 * f[m - 4]) * c;
  d[m - 1] = (11.0 * f[m] - 20.0 * f[m - 1] + 6.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) * c;
  return d;
}

double interpolate(const GridFunction& g, double x, OutOfRange policy) {
  const std::size_t n = g.size();
  if (n == 0) return 0.0;
  const double lo = g.nodes.front(), hi = g.nodes.back();
  if (x < lo || x > hi) {
    if (policy == OutOfRange::Zero) return 0.0;
    if (policy == OutOfRange::Clamp) return x < lo ? g.values.front() : g.values.back();
  }
  if (n == 1) return g.values[0];
  const double h = (hi - lo) / static_cast<double>(n - 1);
  const int width = static_cast<int>(std::min<std::size_t>(6, n));
  int left = static_cast<int>(std::floor((x - lo) / h)) - (width / 2 - 1);
  left = std::clamp(left, 0, static_cast<int>(n) - width);
  double acc = 0.0;
  for (int j = 0; j < width; ++j) {
    const double xj = g.nodes[left + j];
    double lj = 1.0;
    for (int m = 0; m < width; ++m)
      if (m != j) lj *= (x - g.nodes[left + m]) / (xj - g.nodes[left + m]);
    acc += lj * g.values[left + j];
  }
  return acc;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace blowup
