#include "blowup/profile.hpp"

#include <cmath>

#include "blowup/errors.hpp"

namespace blowup {

ModelParams make_params(double p, int k) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("make_params: p must exceed 1");
  if (k < 2) throw DomainError("make_params: k must be an integer >= 2");
  ModelParams mp;
  mp.p = p;
  mp.k = k;
  mp.kappa = std::pow(p - 1.0, -1.0 / (p - 1.0));
  mp.M = 2.0 * k * p / (p - 1.0);
  const double fl = std::floor(mp.M);
  mp.M_floor = static_cast<int>(fl == mp.M ? fl - 1.0 : fl);
  return mp;
}

double scale_factor(double s, int k) { return std::exp(0.5 * s * (1.0 - 1.0 / k)); }

ProfileValue eval_profile(double y, double b, const ModelParams& mp) {
  const double base = mp.p - 1.0 + b * std::pow(y * y, mp.k);
  return {std::pow(base, -1.0 / (mp.p - 1.0)), 1.0 / base};
}

ProfileDerivs profile_derivs(double y, double b, const ModelParams& mp) {
  const int k = mp.k;
  const double p = mp.p;
  const double y2km2 = std::pow(y, 2 * k - 2);
  const double y2k = y2km2 * y * y;
  const double base = p - 1.0 + b * y2k;
  const double f = std::pow(base, -1.0 / (p - 1.0));
  const double fp = f / base;  // f^p
  const double c = 2.0 * k * b / (p - 1.0);
  // f' = -c y^{2k-1} f^p ; (f^p)' = -c p y^{2k-1} f^p e
  const double df = -c * y2km2 * y * fp;
  const double d2f = -c * (2 * k - 1) * y2km2 * fp + c * c * p * y2km2 * y2k * fp / base;
  return {f, df, d2f};
}

AlphaConstants alpha_consts(double b, const ModelParams& mp) {
  const double p = mp.p, k = mp.k;
  const double r = b / (p - 1.0);
  return {-2.0 * k * (2.0 * k - 1.0) * r, 4.0 * p * k * k * r * r, -2.0 * p * k * (2.0 * k - 1.0) * r,
          4.0 * p * (2.0 * p - 1.0) * k * k * r * r};
}

double signed_pow(double x, double p) {
  const double a = std::abs(x);
  return std::copysign(std::pow(a, p), x);
}

FramePoint selfsimilar_map(const FramePoint& pt, double T, const ModelParams& mp, Direction dir) {
  const double inv_pm1 = 1.0 / (mp.p - 1.0);
  const double inv_2k = 1.0 / (2.0 * mp.k);
  if (dir == Direction::Forward) {
    if (!(pt.time < T)) throw DomainError("selfsimilar_map: requires t < T");
    const double tau = T - pt.time;
    return {pt.space * std::pow(tau, -inv_2k), -std::log(tau), std::pow(tau, inv_pm1) * pt.value};
  }
  if (T > 0 && pt.time < -std::log(T)) throw DomainError("selfsimilar_map: requires s >= -ln T");
  const double tau = std::exp(-pt.time);
  return {pt.space * std::pow(tau, inv_2k), T - tau, std::pow(tau, -inv_pm1) * pt.value};
}

GridFunction q_w_maps(const GridFunction& field, double b, const ModelParams& mp, QwDirection dir) {
  GridFunction out{field.nodes, std::vector<double>(field.size())};
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double y = field.nodes[i];
    const double base = mp.p - 1.0 + b * std::pow(y * y, mp.k);
    const double f = std::pow(base, -1.0 / (mp.p - 1.0));
    if (dir == QwDirection::QToW) {
      out.values[i] = f * (1.0 + field.values[i] / base);
    } else {
      // f^{-p} = base^{p/(p-1)}
      out.values[i] = field.values[i] * std::pow(base, mp.p / (mp.p - 1.0)) - base;
    }
  }
  return out;
}

}  // namespace blowup
