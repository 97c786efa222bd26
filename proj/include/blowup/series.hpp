#pragma once

#include <vector>

namespace blowup::series {

// Truncated power series in y: a[j] is the coefficient of y^j, degree <= a.size()-1.

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b, int degree);
Series derivative(const Series& a);
/// Multiply by y^shift, truncating at `degree`.
Series shift(const Series& a, int by, int degree);
/// sign(a0) |A|^p as a series; requires a[0] != 0.
Series signed_power(const Series& a, double p, int degree);
Series resized(Series a, int degree);
void axpy(double alpha, const Series& x, Series& y);

}  // namespace blowup::series
