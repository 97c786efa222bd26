#include "blowup/operators.hpp"

#include <cmath>

#include "blowup/errors.hpp"
#include "blowup/series.hpp"

namespace blowup {

namespace {

double beta_of(double s, int k) {
  const double I = scale_factor(s, k);
  return 1.0 / (I * I);
}

double ypow(double y, int n) { return n == 0 ? 1.0 : std::pow(y, n); }

GridFunction like(const GridFunction& g) { return {g.nodes, std::vector<double>(g.size())}; }

// Taylor degree beyond the largest requested projection.
constexpr int kSeriesExtra = 24;
// Minimum (I rho0)^2/4 for the Taylor route to be accurate.
constexpr double kSeriesMinExponent = 40.0;

}  // namespace

double nonlinear_point(double q, double e, double p) {
  const double x = e * q;
  if (std::abs(x) < 0.05) {
    // binomial series from the quadratic term; avoids cancellation for small x
    double c = p * (p - 1.0) / 2.0, xn = x * x, acc = 0.0;
    for (int j = 2; j < 60; ++j) {
      const double term = c * xn;
      acc += term;
      if (std::abs(term) <= 1e-18 * std::abs(acc)) break;
      c *= (p - j) / (j + 1.0);
      xn *= x;
    }
    return acc;
  }
  return signed_pow(1.0 + x, p) - 1.0 - p * x;
}

double drift_point(double dq, double y, double b, double beta, const ModelParams& mp) {
  const int k = mp.k;
  const double e = 1.0 / (mp.p - 1.0 + b * ypow(y, 2 * k));
  return -4.0 * mp.p * k * b / (mp.p - 1.0) * beta * e * ypow(y, 2 * k - 1) * dq;
}

double residual_point(double q, double y, double b, double beta, const ModelParams& mp,
                      CoefficientForm form) {
  const int k = mp.k;
  const double y2k = ypow(y, 2 * k);
  const double e = 1.0 / (mp.p - 1.0 + b * y2k);
  const auto a = alpha_consts(b, mp);
  const double qfac = form == CoefficientForm::Derived ? e * q : q;
  return beta * ypow(y, 2 * k - 2) *
         (a.alpha1 + a.alpha2 * y2k * e + (a.alpha3 + a.alpha4 * y2k * e) * qfac);
}

double modulation_point(double q, double y, double b, const ModelParams& mp, CoefficientForm form) {
  const double p = mp.p;
  const double y2k = ypow(y, 2 * mp.k);
  const double e = 1.0 / (p - 1.0 + b * y2k);
  if (form == CoefficientForm::Derived) return y2k * (1.0 / (p - 1.0) + p / (p - 1.0) * e * q);
  return p / (p - 1.0) * y2k * (1.0 + e * q);
}

GridFunction apply_Ls(const GridFunction& f, double s, const ModelParams& mp) {
  const auto d1 = diff1(f);
  const auto d2 = diff2(f);
  const double beta = beta_of(s, mp.k);
  const double c = 1.0 / (2.0 * mp.k);
  GridFunction out = like(f);
  for (std::size_t i = 0; i < f.size(); ++i)
    out.values[i] = beta * d2[i] - c * f.nodes[i] * d1[i] + f.values[i];
  return out;
}

std::vector<double> apply_Ls_modal(const std::vector<double>& coeffs, double s, int k) {
  const double beta = beta_of(s, k);
  std::vector<double> out(coeffs.size(), 0.0);
  for (int m = 0; m < static_cast<int>(coeffs.size()); ++m) {
    out[m] += (1.0 - m / (2.0 * k)) * coeffs[m];
    if (m >= 2) out[m - 2] += m * (m - 1) * (1.0 - 1.0 / k) * beta * coeffs[m];
  }
  return out;
}

GridFunction eval_N(const GridFunction& q, double b, const ModelParams& mp) {
  GridFunction out = like(q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double e = eval_profile(q.nodes[i], b, mp).e;
    out.values[i] = nonlinear_point(q.values[i], e, mp.p);
  }
  return out;
}

std::pair<GridFunction, GridFunction> eval_DR(const GridFunction& q, double b, double s,
                                              const ModelParams& mp, const OperatorOptions& opt) {
  const auto dq = diff1(q);
  const double beta = beta_of(s, mp.k);
  GridFunction D = like(q), R = like(q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double y = q.nodes[i];
    D.values[i] = drift_point(dq[i], y, b, beta, mp);
    R.values[i] = residual_point(q.values[i], y, b, beta, mp, opt.residual);
  }
  return {D, R};
}

GridFunction eval_M(const GridFunction& q, double b, const ModelParams& mp,
                    const OperatorOptions& opt) {
  GridFunction out = like(q);
  for (std::size_t i = 0; i < q.size(); ++i)
    out.values[i] = modulation_point(q.values[i], q.nodes[i], b, mp, opt.modulation);
  return out;
}

GridFunction w_rhs(const GridFunction& w, double s, const ModelParams& mp) {
  const auto d1 = diff1(w);
  const auto d2 = diff2(w);
  const double beta = beta_of(s, mp.k);
  const double c = 1.0 / (2.0 * mp.k);
  GridFunction out = like(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = w.values[i];
    out.values[i] =
        beta * d2[i] - c * w.nodes[i] * d1[i] - v / (mp.p - 1.0) + signed_pow(v, mp.p);
  }
  return out;
}

ProjectedTerms project_terms_quadrature(const ScalarFn& q, const ScalarFn& dq, double b, double s,
                                        int nmax, const ModelParams& mp,
                                        const OperatorOptions& opt, int order) {
  const auto& rule = gauss_hermite(order);
  const double I = scale_factor(s, mp.k);
  const double beta = 1.0 / (I * I);
  ProjectedTerms t;
  t.nonlinear.assign(nmax + 1, 0.0);
  t.drift.assign(nmax + 1, 0.0);
  t.residual.assign(nmax + 1, 0.0);
  t.modulation.assign(nmax + 1, 0.0);
  for (int i = 0; i < rule.order; ++i) {
    const double z = rule.nodes[i];
    const double y = z / I;
    const double qv = q(y);
    const double e = eval_profile(y, b, mp).e;
    const double w = rule.weights[i];
    const double vn = w * nonlinear_point(qv, e, mp.p);
    const double vd = w * drift_point(dq(y), y, b, beta, mp);
    const double vr = w * residual_point(qv, y, b, beta, mp, opt.residual);
    const double vm = w * modulation_point(qv, y, b, mp, opt.modulation);
    double prev = 0.0, cur = 1.0;
    for (int j = 0; j <= nmax; ++j) {
      t.nonlinear[j] += vn * cur;
      t.drift[j] += vd * cur;
      t.residual[j] += vr * cur;
      t.modulation[j] += vm * cur;
      const double next = (z * cur - std::sqrt(2.0 * j) * prev) / std::sqrt(2.0 * (j + 1));
      prev = cur;
      cur = next;
    }
  }
  double scale = 1.0;
  for (int j = 0; j <= nmax; ++j) {
    if (j > 0) scale *= I / std::sqrt(2.0 * j);
    t.nonlinear[j] *= scale;
    t.drift[j] *= scale;
    t.residual[j] *= scale;
    t.modulation[j] *= scale;
  }
  return t;
}

bool series_valid(double b, double s, const ModelParams& mp) {
  if (b <= 0.0) return true;
  const double I = scale_factor(s, mp.k);
  const double rho0 = std::pow((mp.p - 1.0) / b, 1.0 / (2.0 * mp.k));
  return 0.25 * I * I * rho0 * rho0 >= kSeriesMinExponent;
}

ProjectedTerms project_terms_series(const std::vector<double>& coeffs, double b, double s, int nmax,
                                    const ModelParams& mp, const OperatorOptions& opt) {
  namespace ps = series;
  const int k = mp.k;
  const double p = mp.p;
  const double beta = beta_of(s, k);
  const int J = static_cast<int>(coeffs.size()) - 1;
  const int T = std::max(J, nmax) + kSeriesExtra;

  const ps::Series Q = ps::resized(hermite_to_monomial(coeffs, beta), T);
  ps::Series E(T + 1, 0.0);
  {
    double c = 1.0 / (p - 1.0);
    for (int i = 0; 2 * k * i <= T; ++i) {
      E[2 * k * i] = c;
      c *= -b / (p - 1.0);
    }
  }
  const ps::Series X = ps::mul(E, Q, T);  // e_b q

  ps::Series onePlusX = X;
  onePlusX[0] += 1.0;
  ps::Series N = ps::signed_power(onePlusX, p, T);
  N[0] -= 1.0;
  ps::axpy(-p, X, N);

  const double cD = -4.0 * p * k * b / (p - 1.0) * beta;
  ps::Series D = ps::shift(ps::mul(E, ps::derivative(Q), T), 2 * k - 1, T);
  for (double& v : D) v *= cD;

  const auto a = alpha_consts(b, mp);
  const ps::Series Ey = ps::shift(E, 2 * k, T);  // y^{2k} e_b
  ps::Series qcoef(T + 1, 0.0);                  // a3 + a4 y^{2k} e_b
  qcoef[0] = a.alpha3;
  ps::axpy(a.alpha4, Ey, qcoef);
  ps::Series inner(T + 1, 0.0);
  inner[0] = a.alpha1;
  ps::axpy(a.alpha2, Ey, inner);
  ps::axpy(1.0, ps::mul(qcoef, opt.residual == CoefficientForm::Derived ? X : Q, T), inner);
  ps::Series R = ps::shift(inner, 2 * k - 2, T);
  for (double& v : R) v *= beta;

  ps::Series Mb(T + 1, 0.0);
  if (opt.modulation == CoefficientForm::Derived) {
    Mb[0] = 1.0 / (p - 1.0);
    ps::axpy(p / (p - 1.0), X, Mb);
  } else {
    Mb[0] = p / (p - 1.0);
    ps::axpy(p / (p - 1.0), X, Mb);
  }
  const ps::Series M = ps::shift(Mb, 2 * k, T);

  return {project_monomials(N, nmax, beta), project_monomials(D, nmax, beta),
          project_monomials(R, nmax, beta), project_monomials(M, nmax, beta)};
}

BprimeSolution bprime_from_projections(const ProjectedTerms& t, const ModelParams& mp,
                                       const OperatorOptions& opt) {
  const int n = 2 * mp.k;
  const double pm = t.modulation.at(n);
  const double norm = opt.modulation == CoefficientForm::Derived ? (mp.p - 1.0)
                                                                 : (mp.p - 1.0) / mp.p;
  BprimeSolution sol;
  sol.denominator = norm * pm;
  if (!(std::abs(sol.denominator) >= opt.denom_guard))
    throw ModulationBreakdown("modulation breakdown: b' denominator " +
                                  std::to_string(sol.denominator) + " below guard",
                              sol.denominator);
  sol.bprime = -(t.nonlinear[n] + t.drift[n] + t.residual[n]) / pm;
  return sol;
}

double solve_bprime(const SpectralDecomposition& dec, double b, double s, const ModelParams& mp,
                    const OperatorOptions& opt) {
  const int n = 2 * mp.k;
  bool zero_rem = true;
  for (double v : dec.remainder.values) zero_rem = zero_rem && v == 0.0;
  ProjectedTerms t;
  if ((dec.exact() || zero_rem) && series_valid(b, s, mp)) {
    t = project_terms_series(dec.coefficients(), b, s, n, mp, opt);
  } else {
    const double beta = beta_of(s, mp.k);
    const auto coeffs = dec.coefficients();
    GridFunction drem;
    if (!dec.exact() && dec.remainder.size() >= 5)
      drem = GridFunction{dec.remainder.nodes, diff1(dec.remainder)};
    auto q = [&](double y) { return dec.evaluate(y, mp.k); };
    auto dq = [&](double y) {
      const int top = static_cast<int>(coeffs.size()) - 1;
      const auto h = scaled_hermite_all(std::max(top, 0), y, beta);
      double v = 0.0;
      for (int m = 1; m <= top; ++m) v += coeffs[m] * m * h[m - 1];
      if (drem.size() > 0) v += interpolate(drem, y);
      return v;
    };
    t = project_terms_quadrature(q, dq, b, s, n, mp, opt);
  }
  return bprime_from_projections(t, mp, opt).bprime;
}

RhsBundle assemble_rhs(const GridFunction& q, double b, double s, double bprime,
                       const ModelParams& mp, const OperatorOptions& opt) {
  RhsBundle r;
  r.linear = apply_Ls(q, s, mp);
  r.nonlinear = eval_N(q, b, mp);
  std::tie(r.drift, r.residual) = eval_DR(q, b, s, mp, opt);
  r.modulation = eval_M(q, b, mp, opt);
  r.bprime = bprime;
  return r;
}

ConsistencyReport consistency_residual(const GridFunction& q, double b, double s,
                                       const ModelParams& mp, double bprime,
                                       const OperatorOptions& opt, int interior_margin) {
  q.validate();
  const RhsBundle r = assemble_rhs(q, b, s, bprime, mp, opt);
  ConsistencyReport rep;
  rep.q_rate_assembled = like(q);
  for (std::size_t i = 0; i < q.size(); ++i)
    rep.q_rate_assembled.values[i] = r.linear.values[i] + r.nonlinear.values[i] +
                                     r.drift.values[i] + r.residual.values[i] +
                                     bprime * r.modulation.values[i];

  const GridFunction w = q_w_maps(q, b, mp, QwDirection::QToW);
  const GridFunction wr = w_rhs(w, s, mp);
  const double eps = 1e-6 * std::max(1.0, std::abs(b));
  GridFunction dqdb = like(q);
  if (bprime != 0.0) {
    const auto up = q_w_maps(w, b + eps, mp, QwDirection::WToQ);
    const auto dn = q_w_maps(w, b - eps, mp, QwDirection::WToQ);
    for (std::size_t i = 0; i < q.size(); ++i)
      dqdb.values[i] = (up.values[i] - dn.values[i]) / (2.0 * eps);
  }
  rep.q_rate_transformed = like(q);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double y = q.nodes[i];
    const double base = mp.p - 1.0 + b * ypow(y, 2 * mp.k);
    rep.q_rate_transformed.values[i] =
        wr.values[i] * std::pow(base, mp.p / (mp.p - 1.0)) + bprime * dqdb.values[i];
  }
  const int n = static_cast<int>(q.size());
  for (int i = interior_margin; i < n - interior_margin; ++i)
    rep.max_residual = std::max(rep.max_residual, std::abs(rep.q_rate_assembled.values[i] -
                                                           rep.q_rate_transformed.values[i]));
  return rep;
}

}  // namespace blowup
