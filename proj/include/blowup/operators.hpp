#pragma once

#include <vector>

#include "blowup/grid.hpp"
#include "blowup/hermite.hpp"
#include "blowup/profile.hpp"

namespace blowup {

/**
 * @brief Which closed form to use for two coefficients of the q-equation.
 *
 * Derived: obtained by the chain rule from q = w f_b^{-p} - (p-1+b y^{2k}); these zero
 * the consistency residual. Stated: the alternative closed forms, kept for comparison.
 *  - residual:   q-term of R_s is (a3 + a4 y^{2k} e_b) e_b q  (Derived) vs (a3 + a4 y^{2k} e_b) q
 *  - modulation: y^{2k}/(p-1) + p/(p-1) y^{2k} e_b q         (Derived) vs p/(p-1) y^{2k}(1+e_b q)
 */
enum class CoefficientForm { Derived, Stated };

struct OperatorOptions {
  CoefficientForm residual = CoefficientForm::Derived;
  CoefficientForm modulation = CoefficientForm::Derived;
  double denom_guard = 0.1;  ///< |normalized b' denominator| below this is a breakdown
};

struct RhsBundle {
  GridFunction linear, nonlinear, drift, residual, modulation;
  double bprime = 0;
};

GridFunction apply_Ls(const GridFunction& f, double s, const ModelParams& mp);
/// L_s on H-coefficients (exact Jordan action).
std::vector<double> apply_Ls_modal(const std::vector<double>& coeffs, double s, int k);

GridFunction eval_N(const GridFunction& q, double b, const ModelParams& mp);
std::pair<GridFunction, GridFunction> eval_DR(const GridFunction& q, double b, double s,
                                              const ModelParams& mp,
                                              const OperatorOptions& opt = {});
GridFunction eval_M(const GridFunction& q, double b, const ModelParams& mp,
                    const OperatorOptions& opt = {});
GridFunction w_rhs(const GridFunction& w, double s, const ModelParams& mp);

// Pointwise forms shared by the grid and quadrature paths.
double nonlinear_point(double q, double e, double p);
double drift_point(double dq, double y, double b, double beta, const ModelParams& mp);
double residual_point(double q, double y, double b, double beta, const ModelParams& mp,
                      CoefficientForm form);
double modulation_point(double q, double y, double b, const ModelParams& mp, CoefficientForm form);

/// Projections P_0..P_nmax of N, D, R and M for one state.
struct ProjectedTerms {
  std::vector<double> nonlinear, drift, residual, modulation;
};

/// Quadrature projections; q and q' supplied as callables.
ProjectedTerms project_terms_quadrature(const ScalarFn& q, const ScalarFn& dq, double b, double s,
                                        int nmax, const ModelParams& mp,
                                        const OperatorOptions& opt = {},
                                        int order = kDefaultQuadOrder);

/**
 * @brief Exact projections for q = sum_m c_m H_m(., s), via Taylor coefficients at y = 0.
 *
 * Valid while the Gaussian weight sits well inside the analyticity disc of e_b;
 * series_valid() checks this.
 */
ProjectedTerms project_terms_series(const std::vector<double>& coeffs, double b, double s, int nmax,
                                    const ModelParams& mp, const OperatorOptions& opt = {});
bool series_valid(double b, double s, const ModelParams& mp);

struct BprimeSolution {
  double bprime = 0;
  double denominator = 0;  ///< normalized so that it equals 1 at q = 0
};
BprimeSolution bprime_from_projections(const ProjectedTerms& t, const ModelParams& mp,
                                       const OperatorOptions& opt);

/// b' keeping q_{2k} = 0; throws ModulationBreakdown on a near-singular denominator.
double solve_bprime(const SpectralDecomposition& dec, double b, double s, const ModelParams& mp,
                    const OperatorOptions& opt = {});

RhsBundle assemble_rhs(const GridFunction& q, double b, double s, double bprime,
                       const ModelParams& mp, const OperatorOptions& opt = {});

struct ConsistencyReport {
  double max_residual = 0;  ///< max over interior nodes of |(a) - (b)|
  GridFunction q_rate_assembled;
  GridFunction q_rate_transformed;
};

/**
 * @brief Compares dq/ds assembled from the q-equation with the w-equation pulled back
 * through the change of variables. The b' contribution of the pull-back is a central
 * difference in b at fixed w, so it does not depend on either modulation form.
 */
ConsistencyReport consistency_residual(const GridFunction& q, double b, double s,
                                       const ModelParams& mp, double bprime = 0.0,
                                       const OperatorOptions& opt = {}, int interior_margin = 4);

}  // namespace blowup
