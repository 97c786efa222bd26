#pragma once

#include <vector>

#include "blowup/grid.hpp"
#include "blowup/profile.hpp"
#include "blowup/quadrature.hpp"

namespace blowup {

/**
 * @brief Mode coefficients q_0..q_{M_floor} plus the remainder q_-, pinned to scale time s.
 *
 * When `tail` is non-empty it holds exact coefficients on H_{M_floor+1}, H_{M_floor+2}, ...
 * and `remainder` is that tail sampled on its nodes. Otherwise `remainder` is the only
 * record of q_- and off-grid values are interpolated.
 */
struct SpectralDecomposition {
  double s = 0;
  std::vector<double> modes;
  GridFunction remainder;
  std::vector<double> tail;

  bool exact() const { return !tail.empty(); }
  /// Full coefficient vector q_0..q_J (modes followed by tail).
  std::vector<double> coefficients() const;
  /// q(y) reconstructed from modes and remainder.
  double evaluate(double y, int k) const;
  GridFunction recompose(int k) const;
};

/// H_m(y,s) = I^{-m} h_m(I y); explicit sum for m <= 10, recurrence above.
double eval_scaled_hermite(int m, double y, double s, int k);
/// Same with beta = I^{-2}(s) given directly.
double scaled_hermite_beta(int m, double y, double beta);
/// Explicit factorial sum, any m (reference form).
double scaled_hermite_sum(int m, double y, double beta);
/// H_0..H_mmax at y by recurrence.
std::vector<double> scaled_hermite_all(int mmax, double y, double beta);

/// Gaussian weight rho_s(y).
double weight(double y, double s, int k);

/// <H_n, H_n> in L^2_{rho_s}: beta^n 2^n n!.
double hermite_norm2(int n, double beta);

double inner_product(const ScalarFn& f, const ScalarFn& g, double s, int k,
                     int order = kDefaultQuadOrder);
double inner_product(const GridFunction& f, const GridFunction& g, double s, int k,
                     int order = kDefaultQuadOrder);

/// P_n(f) = <f,H_n>/<H_n,H_n> by quadrature in z = I(s) y.
double project(const ScalarFn& f, int n, double s, int k, int order = kDefaultQuadOrder);
/// All P_0..P_nmax in one quadrature pass.
std::vector<double> project_all(const ScalarFn& f, int nmax, double s, int k,
                                int order = kDefaultQuadOrder);

SpectralDecomposition decompose(const GridFunction& f, double s, const ModelParams& mp,
                                int order = kDefaultQuadOrder);
SpectralDecomposition decompose(const ScalarFn& f, const std::vector<double>& nodes, double s,
                                const ModelParams& mp, int order = kDefaultQuadOrder);

struct Norms {
  double norm_s = 0;              ///< sum |q_m| + |q_-|_s
  double remainder_seminorm = 0;  ///< sup over nodes of |q_-| / (I^{-M} + |y|^M)
  double linfty_M = 0;            ///< sup over nodes of |q| / (1 + |y|^M)
};
Norms norms(const SpectralDecomposition& dec, const ModelParams& mp);
double remainder_seminorm(const GridFunction& rem, double s, const ModelParams& mp);

struct HermiteTerm {
  int index = 0;
  double coeff = 0;
};
/// y^ell H_n = sum coeff * H_index, highest index first.
std::vector<HermiteTerm> multiply_identity(int ell, int n, double s, int k);

// Exact changes of basis between H_m(., s) and monomials y^j (beta = I^{-2}(s)).
std::vector<double> hermite_to_monomial(const std::vector<double>& herm, double beta);
std::vector<double> monomial_to_hermite(const std::vector<double>& mono, double beta);
/// P_m of the polynomial sum_j mono[j] y^j for m = 0..mmax.
std::vector<double> project_monomials(const std::vector<double>& mono, int mmax, double beta);

}  // namespace blowup
