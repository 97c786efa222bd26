#include "blowup/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

// Orthonormal h_n (unit-mass measure) at z, returning h_n, h_{n-1} and sum_{j<n} h_j^2.
struct NormalizedEval {
  double hn, hnm1, christoffel;
};

NormalizedEval eval_normalized(int n, double z) {
  double prev = 0.0, cur = 1.0, sum = 0.0;
  for (int m = 0; m < n; ++m) {
    sum += cur * cur;
    const double next = (z * cur - std::sqrt(2.0 * m) * prev) / std::sqrt(2.0 * (m + 1));
    prev = cur;
    cur = next;
  }
  return {cur, prev, sum};
}

}  // namespace

QuadratureRule build_gauss_hermite(int order) {
  if (order < 1) throw DomainError("quadrature: order must be positive");
  const int n = order;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int m = 1; m < n; ++m) sub[m - 1] = std::sqrt(2.0 * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = es.eigenvalues()[i];
    for (int it = 0; it < 4; ++it) {
      const auto e = eval_normalized(n, z);
      const double deriv = std::sqrt(0.5 * n) * e.hnm1;
      if (deriv == 0.0) break;
      z -= e.hn / deriv;
    }
    rule.nodes[i] = z;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double a = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -a;
    rule.nodes[n - 1 - i] = a;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    rule.weights[i] = 1.0 / eval_normalized(n, rule.nodes[i]).christoffel;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

const QuadratureRule& gauss_hermite(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_hermite(order));
  return *slot;
}

}  // namespace blowup
