#include "blowup/series.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/errors.hpp"

namespace blowup::series {

Series resized(Series a, int degree) {
  a.resize(static_cast<std::size_t>(degree) + 1, 0.0);
  return a;
}

Series mul(const Series& a, const Series& b, int degree) {
  Series c(static_cast<std::size_t>(degree) + 1, 0.0);
  const int na = std::min<int>(static_cast<int>(a.size()) - 1, degree);
  for (int i = 0; i <= na; ++i) {
    if (a[i] == 0.0) continue;
    const int nb = std::min<int>(static_cast<int>(b.size()) - 1, degree - i);
    for (int j = 0; j <= nb; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

Series derivative(const Series& a) {
  if (a.size() <= 1) return Series(1, 0.0);
  Series d(a.size() - 1);
  for (std::size_t j = 1; j < a.size(); ++j) d[j - 1] = static_cast<double>(j) * a[j];
  return d;
}

Series shift(const Series& a, int by, int degree) {
  Series c(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int j = 0; j < static_cast<int>(a.size()) && j + by <= degree; ++j) c[j + by] = a[j];
  return c;
}

Series signed_power(const Series& a, double p, int degree) {
  if (a.empty() || a[0] == 0.0) throw NumericalError("series power: zero constant term");
  const double sign = a[0] < 0 ? -1.0 : 1.0;
  const int na = static_cast<int>(a.size()) - 1;
  auto coef = [&](int j) { return j <= na ? sign * a[j] : 0.0; };
  Series g(static_cast<std::size_t>(degree) + 1, 0.0);
  const double a0 = coef(0);
  g[0] = std::pow(a0, p);
  for (int n = 1; n <= degree; ++n) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(n, na); ++j) acc += (p * j - (n - j)) * coef(j) * g[n - j];
    g[n] = acc / (n * a0);
  }
  if (sign < 0)
    for (double& v : g) v = -v;
  return g;
}

void axpy(double alpha, const Series& x, Series& y) {
  if (y.size() < x.size()) y.resize(x.size(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) y[j] += alpha * x[j];
}

}  // namespace blowup::series
