#pragma once

#include "blowup/grid.hpp"

namespace blowup {

/** @brief Exponent p, flatness index k and the constants derived from them. */
struct ModelParams {
  double p = 3.0;
  int k = 2;
  double kappa = 0.0;  ///< (p-1)^{-1/(p-1)}, the constant self-similar state
  double M = 0.0;      ///< 2kp/(p-1)
  int M_floor = 0;     ///< largest integer strictly below M
};

struct AlphaConstants {
  double alpha1 = 0, alpha2 = 0, alpha3 = 0, alpha4 = 0;
};

struct ProfileValue {
  double f = 0;  ///< (p-1 + b y^{2k})^{-1/(p-1)}
  double e = 0;  ///< (p-1 + b y^{2k})^{-1}
};

ModelParams make_params(double p, int k);

/// I(s) = exp((s/2)(1 - 1/k)).
double scale_factor(double s, int k);

ProfileValue eval_profile(double y, double b, const ModelParams& mp);

/// First and second y-derivatives of the profile f_b, closed form.
struct ProfileDerivs {
  double f = 0, df = 0, d2f = 0;
};
ProfileDerivs profile_derivs(double y, double b, const ModelParams& mp);

AlphaConstants alpha_consts(double b, const ModelParams& mp);

/// sign(x)|x|^p; exact for negative x and non-integer p.
double signed_pow(double x, double p);

struct FramePoint {
  double space = 0;  ///< x or y
  double time = 0;   ///< t or s
  double value = 0;  ///< u or w
};

enum class Direction { Forward, Backward };

/// Forward: (x,t,u) -> (y,s,w). Backward: (y,s,w) -> (x,t,u).
FramePoint selfsimilar_map(const FramePoint& pt, double T, const ModelParams& mp, Direction dir);

enum class QwDirection { QToW, WToQ };

GridFunction q_w_maps(const GridFunction& field, double b, const ModelParams& mp, QwDirection dir);

}  // namespace blowup
