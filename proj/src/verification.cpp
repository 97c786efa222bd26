#include "blowup/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blowup/errors.hpp"
#include "blowup/hermite.hpp"
#include "blowup/mehler.hpp"
#include "blowup/series.hpp"

namespace blowup {

namespace {

double beta_at(double s, int k) {
  const double I = scale_factor(s, k);
  return 1.0 / (I * I);
}

// Relative L^2_{rho_s} distance between a function and a Hermite expansion.
double expansion_error(const ScalarFn& f, const std::vector<double>& expected, double s, int k,
                       int nmax, int order) {
  const std::vector<double> got = project_all(f, nmax, s, k, order);
  const double beta = beta_at(s, k);
  double num = 0, den = 0;
  for (int j = 0; j <= nmax; ++j) {
    const double e = j < static_cast<int>(expected.size()) ? expected[j] : 0.0;
    const double n2 = hermite_norm2(j, beta);
    num += (got[j] - e) * (got[j] - e) * n2;
    den += e * e * n2;
  }
  return std::sqrt(num / den);
}

}  // namespace

SpectralReport spectral_suite(const std::vector<int>& ks, const std::vector<double>& ss, int nmax,
                              int max_product_power, int order) {
  SpectralReport rep;
  for (int k : ks) {
    for (double s : ss) {
      const double beta = beta_at(s, k);
      for (int n = 0; n <= nmax; ++n) {
        const double nn = hermite_norm2(n, beta);
        for (int m = 0; m <= nmax; ++m) {
          const double mm = hermite_norm2(m, beta);
          const double ip = inner_product([&](double y) { return eval_scaled_hermite(n, y, s, k); },
                                          [&](double y) { return eval_scaled_hermite(m, y, s, k); },
                                          s, k, order);
          const double err = std::abs(ip - (n == m ? nn : 0.0)) / std::sqrt(nn * mm);
          rep.orthogonality = std::max(rep.orthogonality, err);
          ++rep.checks;
        }

        // L_s H_n with derivatives taken on the monomial form
        std::vector<double> herm(n + 1, 0.0);
        herm[n] = 1.0;
        const std::vector<double> mono = hermite_to_monomial(herm, beta);
        const std::vector<double> d1 = series::derivative(mono);
        const std::vector<double> d2 = series::derivative(d1);
        auto horner = [](const std::vector<double>& c, double y) {
          double acc = 0;
          for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + *it;
          return acc;
        };
        const ScalarFn ls = [&](double y) {
          return beta * horner(d2, y) - y / (2.0 * k) * horner(d1, y) + horner(mono, y);
        };
        std::vector<double> jordan(n + 1, 0.0);
        jordan[n] = 1.0 - n / (2.0 * k);
        if (n >= 2) jordan[n - 2] = n * (n - 1) * (1.0 - 1.0 / k) * beta;
        rep.jordan = std::max(rep.jordan, expansion_error(ls, jordan, s, k, n, order));
        ++rep.checks;

        for (int l = 1; l <= max_product_power; ++l) {
          std::vector<double> expected(n + l + 1, 0.0);
          for (const auto& t : multiply_identity(l, n, s, k)) expected[t.index] += t.coeff;
          const ScalarFn prod = [&](double y) { return std::pow(y, l) * eval_scaled_hermite(n, y, s, k); };
          rep.product = std::max(rep.product, expansion_error(prod, expected, s, k, n + l, order));
          ++rep.checks;
        }
      }
    }
  }
  return rep;
}

MehlerReport mehler_suite(int k, double sigma, const std::vector<double>& gaps, int nmax,
                          int order) {
  MehlerReport rep;
  for (double tau : gaps) {
    const double s = sigma + tau;
    for (int n = 0; n <= nmax; ++n) {
      const ScalarFn hn = [n, sigma, k](double y) { return eval_scaled_hermite(n, y, sigma, k); };
      const ScalarFn kh = propagate(hn, sigma, s, k, order);
      std::vector<double> expected(n + 1, 0.0);
      expected[n] = mode_multiplier(n, sigma, s, k);
      rep.multiplier = std::max(rep.multiplier, expansion_error(kh, expected, s, k, n + 4, order));
    }

    // semigroup through the midpoint, on a smooth non-polynomial test function
    const ScalarFn f = [](double y) { return std::exp(-y * y) * std::cos(3 * y) + 0.5 * y; };
    const double mid = sigma + 0.5 * tau;
    const ScalarFn direct = propagate(f, sigma, s, k, order);
    const ScalarFn two = propagate(propagate(f, sigma, mid, k, order), mid, s, k, order);
    const double scale = std::sqrt(inner_product(direct, direct, s, k, order));
    const ScalarFn diff = [&](double y) { return direct(y) - two(y); };
    rep.semigroup = std::max(rep.semigroup, std::sqrt(inner_product(diff, diff, s, k, order)) / scale);

    // kernel mass by trapezoid in z around the kernel centre
    for (double y : {0.0, 0.3, -1.1}) {
      const double L = scale_factor(sigma, k) / std::sqrt(-std::expm1(-tau));
      const double c = std::exp(-tau / (2.0 * k)) * y;
      const int m = 4000;
      const double half = 40.0 / L;
      const double h = 2 * half / m;
      double acc = 0;
      for (int i = 0; i <= m; ++i) {
        const double z = c - half + i * h;
        acc += (i == 0 || i == m ? 0.5 : 1.0) * kernel_eval(y, z, s, sigma, k);
      }
      acc *= h;
      rep.mass = std::max(rep.mass, std::abs(acc - std::exp(tau)) / std::exp(tau));
    }
  }
  return rep;
}

ConsistencyReportSuite consistency_suite(const ModelParams& mp, int states, int nodes, double s,
                                         double b, double bprime, const OperatorOptions& opt,
                                         std::uint64_t seed, double domain, int refine_base) {
  if (nodes < 64 || states < 1) throw DomainError("consistency_suite: need nodes >= 64, states >= 1");
  ConsistencyReportSuite rep;
  rep.min_ratio = 1e300;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.3, 0.3), ctr(-0.5 * domain, 0.5 * domain),
      wid(0.15, 0.4);
  for (int st = 0; st < states; ++st) {
    struct Bump { double a, c, w; };
    std::vector<Bump> bumps(3);
    for (auto& bp : bumps) bp = {amp(rng), ctr(rng), wid(rng)};
    const double slope = 0.1 * amp(rng);
    const ScalarFn q = [&](double y) {
      double v = slope * y;
      for (const auto& bp : bumps) v += bp.a * std::exp(-(y - bp.c) * (y - bp.c) / (bp.w * bp.w));
      return v;
    };
    auto at = [&](int n) {
      const GridFunction g = sample_uniform(-domain, domain, static_cast<std::size_t>(n), q);
      return consistency_residual(g, b, s, mp, bprime, opt).max_residual;
    };
    ConsistencySample smp;
    smp.residual = at(nodes);
    smp.residual_coarse = at(refine_base);
    smp.residual_fine = at(2 * refine_base);
    rep.max_residual = std::max(rep.max_residual, smp.residual);
    rep.min_ratio = std::min(rep.min_ratio, smp.residual_coarse / smp.residual_fine);
    rep.samples.push_back(smp);
  }
  return rep;
}

ContractionReport contraction_study(const ModelParams& mp, double sigma,
                                    const std::vector<double>& gaps, double y_max, int nodes) {
  if (gaps.size() < 2) throw DomainError("contraction_study: need at least two gaps");
  const int k = mp.k;
  const ScalarFn bump = [](double y) { return std::exp(-(y - 0.2) * (y - 0.2) / 0.5); };
  const std::vector<double> modes = project_all(bump, mp.M_floor, sigma, k);
  const double beta0 = beta_at(sigma, k);
  const ScalarFn qminus = [modes, bump, beta0, mf = mp.M_floor](double y) {
    const auto h = scaled_hermite_all(mf, y, beta0);
    double v = bump(y);
    for (int n = 0; n <= mf; ++n) v -= modes[n] * h[n];
    return v;
  };
  const std::vector<double> ys = uniform_nodes(-y_max, y_max, static_cast<std::size_t>(nodes));
  const double base = remainder_seminorm(sample(ys, qminus), sigma, mp);
  ContractionReport rep;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double g : gaps) {
    const ScalarFn kq = propagate(qminus, sigma, sigma + g, k);
    const double r = remainder_seminorm(sample(ys, kq), sigma + g, mp) / base;
    rep.gaps.push_back(g);
    rep.ratios.push_back(r);
    const double ly = std::log(r);
    sx += g;
    sy += ly;
    sxx += g * g;
    sxy += g * ly;
  }
  const double n = static_cast<double>(gaps.size());
  rep.exponent = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace blowup

#include "blowup/direct_solver.hpp"
#include "blowup/shooting.hpp"

namespace blowup {

ManufacturedReport manufactured_check(const ModelParams& mp, double b_star, double T,
                                      int snapshots, double x_max, int nodes) {
  if (!(T > 0) || snapshots < 10) throw DomainError("manufactured_check: bad arguments");
  PdeRun run;
  run.frame = Frame::Physical;
  run.domain_lo = -x_max;
  run.domain_hi = x_max;
  run.nodes = static_cast<std::size_t>(nodes);
  run.boundary = "dirichlet";
  run.termination = Termination::BlowupThreshold;
  const std::vector<double> xs = uniform_nodes(-x_max, x_max, static_cast<std::size_t>(nodes));
  for (int i = 0; i < snapshots; ++i) {
    // tau from T/2 down by a factor 1.5 per snapshot
    const long double tau = 0.5L * T * std::pow(1.5L, -static_cast<long double>(i));
    Snapshot sn;
    sn.time = static_cast<long double>(T) - tau;
    sn.field.nodes = xs;
    sn.field.values.resize(xs.size());
    const double amp = static_cast<double>(std::pow(tau, -1.0L / (mp.p - 1)));
    const double inv = static_cast<double>(std::pow(tau, -1.0L / (2 * mp.k)));
    for (std::size_t j = 0; j < xs.size(); ++j)
      sn.field.values[j] = amp * eval_profile(xs[j] * inv, b_star, mp).f;
    run.snapshots.push_back(std::move(sn));
  }
  const ComparisonReport cmp = compare_profile(run, T, mp, default_fit_window(b_star, mp));
  ManufacturedReport rep;
  rep.snapshots = static_cast<int>(cmp.points.size());
  for (const auto& pt : cmp.points) {
    rep.max_distance = std::max(rep.max_distance, pt.distance);
    rep.max_b_error = std::max(rep.max_b_error, std::abs(pt.b - b_star));
  }
  return rep;
}

TrendReport survivor_trend(const std::vector<double>& d_star, const ModelParams& mp,
                           const TrendConfig& cfg) {
  const std::vector<double> psi_mono = [&] {
    const double amp = std::pow(scale_factor(cfg.s0, mp.k), -cfg.delta);
    std::vector<double> m(d_star.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = d_star[i] * amp;
    return m;
  }();
  const GridFunction w0 = sample_uniform(
      -cfg.domain, cfg.domain, static_cast<std::size_t>(cfg.nodes), [&](double y) {
        double psi = 0;
        for (auto it = psi_mono.rbegin(); it != psi_mono.rend(); ++it) psi = psi * y + *it;
        const ProfileValue pv = eval_profile(y, cfg.b0, mp);
        return pv.f * (1.0 + pv.e * psi);
      });
  WSolverConfig wc;
  wc.ds = cfg.ds;
  wc.snapshot_every = std::max(1, static_cast<int>(std::lround(cfg.sample_every / cfg.ds)));
  const PdeRun run = solve_w_direct(w0, cfg.s0, cfg.s0 + cfg.span, mp, wc);
  TrendReport rep;
  rep.termination = to_string(run.termination);
  if (run.termination != Termination::Horizon) return rep;
  const ComparisonReport cmp = compare_profile(run, 0.0L, mp, cfg.fit_window);
  for (const auto& pt : cmp.points) {
    rep.s.push_back(static_cast<double>(pt.time));
    rep.distance.push_back(pt.distance);
    rep.b.push_back(pt.b);
  }
  const double s_half = cfg.s0 + 0.5 * cfg.span;
  rep.distance_nonincreasing = true;
  for (std::size_t i = 1; i < rep.s.size(); ++i) {
    if (rep.s[i - 1] < s_half - 1e-9) continue;
    if (rep.distance[i] > rep.distance[i - 1] * (1.0 + cfg.monotone_slack))
      rep.distance_nonincreasing = false;
  }
  // b at the dyadic boundaries s_end - j ln 2, linear interpolation between snapshots
  auto b_at = [&](double s) {
    const auto it = std::lower_bound(rep.s.begin(), rep.s.end(), s);
    if (it == rep.s.begin()) return rep.b.front();
    if (it == rep.s.end()) return rep.b.back();
    const std::size_t i = static_cast<std::size_t>(it - rep.s.begin());
    const double th = (s - rep.s[i - 1]) / (rep.s[i] - rep.s[i - 1]);
    return (1 - th) * rep.b[i - 1] + th * rep.b[i];
  };
  const double s_end = rep.s.back();
  for (int j = 4; j >= 1; --j) {
    const double a = s_end - j * std::log(2.0), c = s_end - (j - 1) * std::log(2.0);
    rep.b_increments.push_back(std::abs(b_at(c) - b_at(a)));
  }
  rep.increments_shrinking = true;
  for (std::size_t i = 1; i < rep.b_increments.size(); ++i)
    if (!(rep.b_increments[i] < rep.b_increments[i - 1])) rep.increments_shrinking = false;
  return rep;
}

BlowupTimeReport blowup_time_check(const ModelParams& mp, double T, double threshold,
                                   double domain, int nodes) {
  const double level = mp.kappa * std::pow(T, -1.0 / (mp.p - 1));
  const GridFunction u0 = sample_uniform(-domain, domain, static_cast<std::size_t>(nodes),
                                         [level](double) { return level; });
  USolverConfig uc;
  uc.threshold = threshold;
  const PdeRun a = solve_u_physical(u0, 10 * T, mp, uc);
  const PdeRun b = solve_u_physical(u0, 10 * T, mp, uc);
  const BlowupEstimate ea = estimate_blowup_time(a, mp);
  const BlowupEstimate eb = estimate_blowup_time(b, mp);
  BlowupTimeReport rep;
  rep.T_hat = ea.T_hat;
  rep.residual = ea.residual;
  rep.relative_error = static_cast<double>(std::abs(ea.T_hat - T) / T);
  rep.deterministic = ea.T_hat == eb.T_hat && a.history.size() == b.history.size();
  return rep;
}

}  // namespace blowup
