#include "blowup/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

constexpr double kInvSqrt4Pi = 0.28209479177387814;  // 1/sqrt(4 pi)

void check_order(int order) {
  if (order < kMinQuadOrder) throw DomainError("quadrature order below configured minimum");
}

double beta_of(double s, int k) {
  const double I = scale_factor(s, k);
  return 1.0 / (I * I);
}

}  // namespace

double scaled_hermite_sum(int m, double y, double beta) {
  if (m < 0) throw DomainError("hermite: negative index");
  double c = 1.0, acc = 0.0;
  for (int l = 0; 2 * l <= m; ++l) {
    acc += c * std::pow(y, m - 2 * l);
    c *= static_cast<double>(m - 2 * l) * (m - 2 * l - 1) / (l + 1) * (-beta);
  }
  return acc;
}

std::vector<double> scaled_hermite_all(int mmax, double y, double beta) {
  std::vector<double> h(static_cast<std::size_t>(std::max(mmax, 0)) + 1);
  h[0] = 1.0;
  if (mmax >= 1) h[1] = y;
  for (int m = 1; m < mmax; ++m) h[m + 1] = y * h[m] - 2.0 * m * beta * h[m - 1];
  return h;
}

double scaled_hermite_beta(int m, double y, double beta) {
  if (m < 0) throw DomainError("hermite: negative index");
  if (m <= 10) return scaled_hermite_sum(m, y, beta);
  return scaled_hermite_all(m, y, beta)[m];
}

double eval_scaled_hermite(int m, double y, double s, int k) {
  return scaled_hermite_beta(m, y, beta_of(s, k));
}

double weight(double y, double s, int k) {
  const double I = scale_factor(s, k);
  return I * kInvSqrt4Pi * std::exp(-0.25 * I * I * y * y);
}

double hermite_norm2(int n, double beta) {
  double v = 1.0;
  for (int j = 1; j <= n; ++j) v *= 2.0 * j * beta;
  return v;
}

double inner_product(const ScalarFn& f, const ScalarFn& g, double s, int k, int order) {
  check_order(order);
  const auto& q = gauss_hermite(order);
  const double I = scale_factor(s, k);
  double acc = 0.0;
  for (int i = 0; i < q.order; ++i) {
    const double y = q.nodes[i] / I;
    acc += q.weights[i] * f(y) * g(y);
  }
  return acc;
}

double inner_product(const GridFunction& f, const GridFunction& g, double s, int k, int order) {
  return inner_product([&](double y) { return interpolate(f, y); },
                       [&](double y) { return interpolate(g, y); }, s, k, order);
}

std::vector<double> project_all(const ScalarFn& f, int nmax, double s, int k, int order) {
  check_order(order);
  const auto& q = gauss_hermite(order);
  const double I = scale_factor(s, k);
  std::vector<double> acc(nmax + 1, 0.0);
  for (int i = 0; i < q.order; ++i) {
    const double z = q.nodes[i];
    const double wf = q.weights[i] * f(z / I);
    double prev = 0.0, cur = 1.0;
    for (int j = 0; j <= nmax; ++j) {
      acc[j] += wf * cur;
      const double next = (z * cur - std::sqrt(2.0 * j) * prev) / std::sqrt(2.0 * (j + 1));
      prev = cur;
      cur = next;
    }
  }
  // P_j = I^j / sqrt(2^j j!) * sum w f hhat_j
  double scale = 1.0;
  for (int j = 0; j <= nmax; ++j) {
    if (j > 0) scale *= I / std::sqrt(2.0 * j);
    acc[j] *= scale;
  }
  return acc;
}

double project(const ScalarFn& f, int n, double s, int k, int order) {
  return project_all(f, n, s, k, order)[n];
}

namespace {
SpectralDecomposition finish_decomposition(const ScalarFn& f, const std::vector<double>& nodes,
                                           double s, const ModelParams& mp, int order) {
  SpectralDecomposition dec;
  dec.s = s;
  dec.modes = project_all(f, mp.M_floor, s, mp.k, order);
  const double beta = beta_of(s, mp.k);
  dec.remainder.nodes = nodes;
  dec.remainder.values.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto h = scaled_hermite_all(mp.M_floor, nodes[i], beta);
    double plus = 0.0;
    for (int n = 0; n <= mp.M_floor; ++n) plus += dec.modes[n] * h[n];
    dec.remainder.values[i] = f(nodes[i]) - plus;
  }
  return dec;
}
}  // namespace

SpectralDecomposition decompose(const GridFunction& f, double s, const ModelParams& mp, int order) {
  f.validate();
  SpectralDecomposition dec = finish_decomposition(
      [&](double y) { return interpolate(f, y); }, f.nodes, s, mp, order);
  // exact node values rather than interpolated ones
  const double beta = beta_of(s, mp.k);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto h = scaled_hermite_all(mp.M_floor, f.nodes[i], beta);
    double plus = 0.0;
    for (int n = 0; n <= mp.M_floor; ++n) plus += dec.modes[n] * h[n];
    dec.remainder.values[i] = f.values[i] - plus;
  }
  return dec;
}

SpectralDecomposition decompose(const ScalarFn& f, const std::vector<double>& nodes, double s,
                                const ModelParams& mp, int order) {
  return finish_decomposition(f, nodes, s, mp, order);
}

std::vector<double> SpectralDecomposition::coefficients() const {
  std::vector<double> c = modes;
  c.insert(c.end(), tail.begin(), tail.end());
  return c;
}

double SpectralDecomposition::evaluate(double y, int k) const {
  const double beta = beta_of(s, k);
  const int top = static_cast<int>(modes.size() + tail.size()) - 1;
  const auto h = scaled_hermite_all(std::max(top, 0), y, beta);
  double v = 0.0;
  for (std::size_t n = 0; n < modes.size(); ++n) v += modes[n] * h[n];
  if (exact()) {
    for (std::size_t j = 0; j < tail.size(); ++j) v += tail[j] * h[modes.size() + j];
  } else if (remainder.size() > 0) {
    v += interpolate(remainder, y);
  }
  return v;
}

GridFunction SpectralDecomposition::recompose(int k) const {
  const double beta = beta_of(s, k);
  GridFunction g{remainder.nodes, remainder.values};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto h = scaled_hermite_all(static_cast<int>(modes.size()), g.nodes[i], beta);
    for (std::size_t n = 0; n < modes.size(); ++n) g.values[i] += modes[n] * h[n];
  }
  return g;
}

double remainder_seminorm(const GridFunction& rem, double s, const ModelParams& mp) {
  const double Im = std::pow(scale_factor(s, mp.k), -mp.M);
  double sup = 0.0;
  for (std::size_t i = 0; i < rem.size(); ++i) {
    const double den = Im + std::pow(std::abs(rem.nodes[i]), mp.M);
    sup = std::max(sup, std::abs(rem.values[i]) / den);
  }
  return sup;
}

Norms norms(const SpectralDecomposition& dec, const ModelParams& mp) {
  Norms out;
  out.remainder_seminorm = remainder_seminorm(dec.remainder, dec.s, mp);
  double sum = 0.0;
  for (double q : dec.modes) sum += std::abs(q);
  out.norm_s = sum + out.remainder_seminorm;
  const GridFunction full = dec.recompose(mp.k);
  for (std::size_t i = 0; i < full.size(); ++i) {
    const double den = 1.0 + std::pow(std::abs(full.nodes[i]), mp.M);
    out.linfty_M = std::max(out.linfty_M, std::abs(full.values[i]) / den);
  }
  return out;
}

std::vector<HermiteTerm> multiply_identity(int ell, int n, double s, int k) {
  if (ell < 0 || n < 0) throw DomainError("multiply_identity: negative index");
  const double beta = beta_of(s, k);
  std::map<int, double> acc;
  if (ell == 0) {
    acc[n] = 1.0;
  } else if (ell == 1) {
    acc[n + 1] = 1.0;
    if (n >= 1) acc[n - 1] = 2.0 * n * beta;
  } else {
    acc[n + 2] = 1.0;
    acc[n] = (4.0 * n + 2.0) * beta;
    if (n >= 2) acc[n - 2] = 4.0 * n * (n - 1) * beta * beta;
    for (int step = 2; step < ell; ++step) {
      std::map<int, double> next;
      for (const auto& [m, c] : acc) {
        next[m + 1] += c;
        if (m >= 1) next[m - 1] += 2.0 * m * beta * c;
      }
      acc.swap(next);
    }
  }
  std::vector<HermiteTerm> out;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it) out.push_back({it->first, it->second});
  return out;
}

std::vector<double> hermite_to_monomial(const std::vector<double>& herm, double beta) {
  std::vector<double> mono(herm.size(), 0.0);
  for (int m = 0; m < static_cast<int>(herm.size()); ++m) {
    if (herm[m] == 0.0) continue;
    double c = 1.0;
    for (int l = 0; 2 * l <= m; ++l) {
      mono[m - 2 * l] += herm[m] * c;
      c *= static_cast<double>(m - 2 * l) * (m - 2 * l - 1) / (l + 1) * (-beta);
    }
  }
  return mono;
}

std::vector<double> monomial_to_hermite(const std::vector<double>& mono, double beta) {
  std::vector<double> herm(mono.size(), 0.0);
  for (int j = 0; j < static_cast<int>(mono.size()); ++j) {
    if (mono[j] == 0.0) continue;
    double c = 1.0;
    for (int l = 0; 2 * l <= j; ++l) {
      herm[j - 2 * l] += mono[j] * c;
      c *= static_cast<double>(j - 2 * l) * (j - 2 * l - 1) / (l + 1) * beta;
    }
  }
  return herm;
}

std::vector<double> project_monomials(const std::vector<double>& mono, int mmax, double beta) {
  std::vector<double> out(mmax + 1, 0.0);
  const int deg = static_cast<int>(mono.size()) - 1;
  for (int m = 0; m <= mmax; ++m) {
    double c = 1.0, acc = 0.0;  // c = (m+2l)!/(m! l!) beta^l
    for (int l = 0; m + 2 * l <= deg; ++l) {
      acc += mono[m + 2 * l] * c;
      c *= static_cast<double>(m + 2 * l + 1) * (m + 2 * l + 2) / (l + 1) * beta;
    }
    out[m] = acc;
  }
  return out;
}

}  // namespace blowup
