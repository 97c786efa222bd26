#pragma once

#include "blowup/grid.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

/// Below this gap propagate() returns its input unchanged.
inline constexpr double kMehlerIdentityGap = 1e-4;

/// Fundamental solution of d/ds = L_s from time sigma to time s > sigma.
double kernel_eval(double y, double z, double s, double sigma, int k);

/// Lazy (K_{s,sigma} f); quadrature centred at e^{-(s-sigma)/2k} y with width ~ 2/L.
ScalarFn propagate(const ScalarFn& f, double sigma, double s, int k, int order = kDefaultQuadOrder);
GridFunction propagate(const GridFunction& f, double sigma, double s, int k,
                       int order = kDefaultQuadOrder);

/// exp((s - sigma)(1 - n/2k)).
double mode_multiplier(int n, double sigma, double s, int k);

}  // namespace blowup
