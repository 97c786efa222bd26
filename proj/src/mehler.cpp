#include "blowup/mehler.hpp"

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/profile.hpp"

namespace blowup {

namespace {
constexpr double kInvSqrt4Pi = 0.28209479177387814;

double kernel_L(double tau, double sigma, int k) {
  return scale_factor(sigma, k) / std::sqrt(-std::expm1(-tau));
}
}  // namespace

double kernel_eval(double y, double z, double s, double sigma, int k) {
  if (!(s > sigma)) throw DomainError("kernel_eval: requires s > sigma");
  const double tau = s - sigma;
  const double L = kernel_L(tau, sigma, k);
  const double xi = std::exp(-tau / (2.0 * k)) * y - z;
  return std::exp(tau) * L * kInvSqrt4Pi * std::exp(-0.25 * L * L * xi * xi);
}

ScalarFn propagate(const ScalarFn& f, double sigma, double s, int k, int order) {
  if (!(s > sigma)) throw DomainError("propagate: requires s > sigma");
  const double tau = s - sigma;
  if (tau < kMehlerIdentityGap) return f;
  const double L = kernel_L(tau, sigma, k);
  const double contract = std::exp(-tau / (2.0 * k));
  const double growth = std::exp(tau);
  const QuadratureRule* rule = &gauss_hermite(order);
  return [f, L, contract, growth, rule](double y) {
    const double c = contract * y;
    double acc = 0.0;
    for (int i = 0; i < rule->order; ++i) acc += rule->weights[i] * f(c + rule->nodes[i] / L);
    return growth * acc;
  };
}

GridFunction propagate(const GridFunction& f, double sigma, double s, int k, int order) {
  f.validate();
  if (!(s > sigma)) throw DomainError("propagate: requires s > sigma");
  if (s - sigma < kMehlerIdentityGap) return f;
  const auto kf = propagate([&f](double y) { return interpolate(f, y, OutOfRange::Extrapolate); },
                            sigma, s, k, order);
  return sample(f.nodes, kf);
}

double mode_multiplier(int n, double sigma, double s, int k) {
  if (s < sigma) throw DomainError("mode_multiplier: requires s >= sigma");
  return std::exp((s - sigma) * (1.0 - n / (2.0 * k)));
}

}  // namespace blowup
