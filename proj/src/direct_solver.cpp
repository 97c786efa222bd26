#include "blowup/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::BlowupThreshold: return "blowup-threshold";
    case Termination::Instability: return "instability";
  }
  return "unknown";
}

const char* to_string(Frame f) { return f == Frame::Physical ? "physical" : "self-similar"; }

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Three ghost nodes per side from quartic extrapolation; padded index i is node i-3.
std::vector<double> pad_outflow(const std::vector<double>& w) {
  const std::size_t n = w.size();
  std::vector<double> g(n + 6);
  std::copy(w.begin(), w.end(), g.begin() + 3);
  for (int j = 2; j >= 0; --j)
    g[j] = 5 * g[j + 1] - 10 * g[j + 2] + 10 * g[j + 3] - 5 * g[j + 4] + g[j + 5];
  for (std::size_t j = n + 3; j < n + 6; ++j)
    g[j] = 5 * g[j - 1] - 10 * g[j - 2] + 10 * g[j - 3] - 5 * g[j - 4] + g[j - 5];
  return g;
}

struct WOp {
  const std::vector<double>& y;
  double h;
  const ModelParams& mp;

  std::vector<double> operator()(const std::vector<double>& w, double s) const {
    const double I = scale_factor(s, mp.k);
    const double beta = 1.0 / (I * I);
    const std::vector<double> g = pad_outflow(w);
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::size_t j = i + 3;
      const double speed = y[i] / (2.0 * mp.k);
      // fifth-order upwind-biased first derivative
      double wy;
      if (speed > 0)
        wy = (-2 * g[j - 3] + 15 * g[j - 2] - 60 * g[j - 1] + 20 * g[j] + 30 * g[j + 1] -
              3 * g[j + 2]) / (60 * h);
      else
        wy = (3 * g[j - 2] - 30 * g[j - 1] - 20 * g[j] + 60 * g[j + 1] - 15 * g[j + 2] +
              2 * g[j + 3]) / (60 * h);
      const double wyy =
          (-g[j - 2] + 16 * g[j - 1] - 30 * g[j] + 16 * g[j + 1] - g[j + 2]) / (12 * h * h);
      const double v = w[i];
      out[i] = beta * wyy - speed * wy - v / (mp.p - 1) + std::pow(std::abs(v), mp.p - 1) * v;
    }
    return out;
  }
};

template <class Op>
std::vector<double> rk4(const Op& f, const std::vector<double>& x, long double t, double dt) {
  const std::size_t n = x.size();
  auto comb = [&](const std::vector<double>& k, double c) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = x[i] + c * k[i];
    return r;
  };
  const auto k1 = f(x, t);
  const auto k2 = f(comb(k1, 0.5 * dt), t + 0.5L * dt);
  const auto k3 = f(comb(k2, 0.5 * dt), t + 0.5L * dt);
  const auto k4 = f(comb(k3, dt), t + static_cast<long double>(dt));
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = x[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return r;
}

}  // namespace

PdeRun solve_w_direct(const GridFunction& w0, double s_start, double s_end, const ModelParams& mp,
                      const WSolverConfig& cfg) {
  w0.validate();
  if (w0.size() < 12) throw DomainError("solve_w_direct: need at least 12 nodes");
  if (!(s_end > s_start)) throw DomainError("solve_w_direct: empty s-range");
  if (!(cfg.ds > 0)) throw DomainError("solve_w_direct: ds must be positive");
  if (!all_finite(w0.values)) throw DomainError("solve_w_direct: non-finite initial data");
  const double h = uniform_spacing(w0);

  PdeRun run;
  run.frame = Frame::SelfSimilar;
  run.domain_lo = w0.nodes.front();
  run.domain_hi = w0.nodes.back();
  run.nodes = w0.size();
  run.boundary = "outflow";
  run.snapshots.push_back({s_start, w0});
  run.history.push_back({s_start, max_abs(w0.values)});

  const double ymax = std::max(std::abs(run.domain_lo), std::abs(run.domain_hi));
  const double transport = ymax / (2.0 * mp.k) * cfg.ds / h;
  const double I0 = scale_factor(s_start, mp.k);
  const double diffusion = cfg.ds / (I0 * I0 * h * h);
  if (transport > cfg.max_transport_cfl || diffusion > cfg.max_diffusion_number) {
    run.termination = Termination::Instability;
    run.message = "CFL violation: transport number " + std::to_string(transport) +
                  ", diffusion number " + std::to_string(diffusion);
    return run;
  }

  const WOp op{w0.nodes, h, mp};
  std::vector<double> w = w0.values;
  long double s = s_start;
  long steps = 0;
  while (s < s_end) {
    const double ds = static_cast<double>(std::min<long double>(cfg.ds, s_end - s));
    if (ds <= 0) break;
    w = rk4(op, w, s, ds);
    s += ds;
    ++steps;
    if (!all_finite(w)) {
      run.termination = Termination::Instability;
      run.message = "non-finite values at s=" + std::to_string(static_cast<double>(s));
      return run;
    }
    run.history.push_back({s, max_abs(w)});
    if (steps % std::max(cfg.snapshot_every, 1) == 0 || s >= s_end)
      run.snapshots.push_back({s, {w0.nodes, w}});
    if (s_end - s < 1e-12L) break;
  }
  if (run.snapshots.back().time != s) run.snapshots.push_back({s, {w0.nodes, w}});
  run.termination = Termination::Horizon;
  return run;
}

PdeRun solve_u_physical(const GridFunction& u0, double t_max, const ModelParams& mp,
                        const USolverConfig& cfg) {
  u0.validate();
  if (u0.size() < 8) throw DomainError("solve_u_physical: need at least 8 nodes");
  if (!(t_max > 0)) throw DomainError("solve_u_physical: t_max must be positive");
  if (!all_finite(u0.values)) throw DomainError("solve_u_physical: unbounded initial data");
  const double h = uniform_spacing(u0);
  const std::size_t n = u0.size();

  PdeRun run;
  run.frame = Frame::Physical;
  run.domain_lo = u0.nodes.front();
  run.domain_hi = u0.nodes.back();
  run.nodes = n;
  run.boundary = "dirichlet";

  std::vector<double> u = u0.values;
  u.front() = 0;
  u.back() = 0;

  auto rhs = [&](const std::vector<double>& v, long double) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double uxx;
      if (i >= 2 && i + 2 < n)
        uxx = (-v[i - 2] + 16 * v[i - 1] - 30 * v[i] + 16 * v[i + 1] - v[i + 2]) / (12 * h * h);
      else
        uxx = (v[i - 1] - 2 * v[i] + v[i + 1]) / (h * h);
      out[i] = uxx + std::pow(std::abs(v[i]), mp.p - 1) * v[i];
    }
    return out;
  };
  auto wall_grad = [&](const std::vector<double>& v) {
    return std::max(std::abs(v[1] - v[0]), std::abs(v[n - 1] - v[n - 2])) / h;
  };

  long double t = 0;
  double sup = max_abs(u);
  run.snapshots.push_back({t, {u0.nodes, u}});
  run.history.push_back({t, sup});
  double last_snap_sup = sup;
  long last_snap_step = 0;
  run.wall_gradient = wall_grad(u);

  for (long step = 1; step <= cfg.max_steps; ++step) {
    double dt = cfg.diffusion_number * h * h;
    if (sup > 0) dt = std::min(dt, cfg.safety * std::pow(sup, -(mp.p - 1)));
    dt = static_cast<double>(std::min<long double>(dt, t_max - t));
    u = rk4(rhs, u, t, dt);
    t += dt;
    if (!all_finite(u)) {
      run.termination = Termination::Instability;
      run.message = "non-finite values at t=" + std::to_string(static_cast<double>(t));
      return run;
    }
    sup = max_abs(u);
    run.history.push_back({t, sup});
    run.wall_gradient = std::max(run.wall_gradient, wall_grad(u));
    const bool blown = sup >= cfg.threshold;
    const bool done = t >= t_max;
    if (blown || done || sup >= last_snap_sup * cfg.snapshot_growth ||
        step - last_snap_step >= cfg.snapshot_every) {
      run.snapshots.push_back({t, {u0.nodes, u}});
      last_snap_sup = sup;
      last_snap_step = step;
    }
    if (blown) {
      run.termination = Termination::BlowupThreshold;
      return run;
    }
    if (done) {
      run.termination = Termination::Horizon;
      return run;
    }
  }
  run.termination = Termination::Horizon;
  run.message = "step limit reached";
  return run;
}

BlowupEstimate estimate_blowup_time(const PdeRun& run, const ModelParams& mp) {
  if (run.termination != Termination::BlowupThreshold || run.history.size() < 3)
    throw DomainError("estimate_blowup_time: run did not reach the blowup threshold");
  const double sup_end = run.history.back().sup;
  double sup_min = sup_end;
  for (const auto& h : run.history) sup_min = std::min(sup_min, h.sup);
  if (!(sup_end >= 10 * sup_min))
    throw DomainError("estimate_blowup_time: norm series is flat");

  std::vector<long double> ts, vs;
  for (const auto& h : run.history) {
    if (h.sup >= sup_end / 10 && h.sup > 0) {
      ts.push_back(h.time);
      vs.push_back(std::pow(static_cast<long double>(h.sup), -(static_cast<long double>(mp.p) - 1)));
    }
  }
  if (ts.size() < 3) throw DomainError("estimate_blowup_time: too few samples in the last decade");
  const long double nn = static_cast<long double>(ts.size());
  const long double pm1 = mp.p - 1;
  long double mean = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) mean += ts[i] + vs[i] / pm1;
  mean /= nn;
  long double ss = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const long double r = ts[i] + vs[i] / pm1 - mean;
    ss += r * r;
  }
  long double tm = 0, vm = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    vm += vs[i];
  }
  tm /= nn;
  vm /= nn;
  long double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sxy += (ts[i] - tm) * (vs[i] - vm);
    sxx += (ts[i] - tm) * (ts[i] - tm);
  }
  BlowupEstimate est;
  est.T_hat = mean;
  est.residual = static_cast<double>(std::sqrt(ss / nn));
  est.free_slope = sxx > 0 ? static_cast<double>(sxy / sxx) : 0.0;
  est.points = static_cast<int>(ts.size());
  return est;
}

ProfileFit fit_profile_b_selfsimilar(const GridFunction& w, double y_fit, const ModelParams& mp) {
  w.validate();
  if (!(y_fit > 0)) throw DomainError("fit_profile_b: fit window must be positive");
  const double pm1 = mp.p - 1;
  std::vector<double> ys, ws;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::abs(w.nodes[i]) <= y_fit && std::isfinite(w.values[i]) && w.values[i] > 0) {
      ys.push_back(w.nodes[i]);
      ws.push_back(w.values[i]);
    }
  }
  ProfileFit fit;
  fit.points = static_cast<int>(ys.size());
  if (ys.size() < 5) throw DomainError("fit_profile_b: fewer than 5 points in the fit window");

  double num = 0, den = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y2k = std::pow(ys[i], 2 * mp.k);
    num += y2k * (std::pow(ws[i], -pm1) - pm1);
    den += y2k * y2k;
  }
  if (!(den > 0)) throw DomainError("fit_profile_b: fit window contains only the origin");
  double b = num / den;
  constexpr double kFlat = 1e-10;
  if (!(b > kFlat)) {
    fit.flat = true;
    fit.b = 0;
  } else {
    for (int it = 0; it < 50; ++it) {
      double jr = 0, jj = 0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y2k = std::pow(ys[i], 2 * mp.k);
        const double f = std::pow(pm1 + b * y2k, -1.0 / pm1);
        const double jac = -y2k * std::pow(f, mp.p) / pm1;
        jr += jac * (ws[i] - f);
        jj += jac * jac;
      }
      if (!(jj > 0)) break;
      double db = jr / jj;
      while (b + db <= 0) db *= 0.5;
      b += db;
      if (std::abs(db) <= 1e-15 * std::max(1.0, b)) break;
    }
    fit.b = b;
    if (!(b > kFlat)) {
      fit.flat = true;
      fit.b = 0;
    }
  }
  double ss = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double r = ws[i] - std::pow(pm1 + fit.b * std::pow(ys[i], 2 * mp.k), -1.0 / pm1);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / static_cast<double>(ys.size()));
  return fit;
}

GridFunction rescale_snapshot(const Snapshot& snap, Frame frame, long double T_hat,
                              const ModelParams& mp) {
  if (frame == Frame::SelfSimilar) return snap.field;
  const long double tau = T_hat - snap.time;
  if (!(tau > 0)) throw DomainError("rescale_snapshot: snapshot time not before T_hat");
  const long double ys = std::pow(tau, -1.0L / (2 * mp.k));
  const long double ws = std::pow(tau, 1.0L / (static_cast<long double>(mp.p) - 1));
  GridFunction g;
  g.nodes.resize(snap.field.size());
  g.values.resize(snap.field.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    g.nodes[i] = static_cast<double>(snap.field.nodes[i] * ys);
    g.values[i] = static_cast<double>(snap.field.values[i] * ws);
  }
  return g;
}

ProfileFit fit_profile_b(const GridFunction& snapshot, long double t, long double T_hat,
                         const ModelParams& mp, double y_fit) {
  if (!(t < T_hat)) throw DomainError("fit_profile_b: requires t < T_hat");
  return fit_profile_b_selfsimilar(rescale_snapshot({t, snapshot}, Frame::Physical, T_hat, mp),
                                   y_fit, mp);
}

double default_fit_window(double b0, const ModelParams& mp) {
  if (!(b0 > 0)) throw DomainError("default_fit_window: b0 must be positive");
  return 2.0 * std::pow(b0, -1.0 / (2 * mp.k));
}

ComparisonReport compare_profile(const PdeRun& run, long double T_hat, const ModelParams& mp,
                                 double y_fit) {
  ComparisonReport rep;
  for (const auto& snap : run.snapshots) {
    long double tau;
    if (run.frame == Frame::Physical) {
      tau = T_hat - snap.time;
      if (!(tau > 0)) continue;
    } else {
      tau = std::exp(-snap.time);
    }
    const GridFunction w = rescale_snapshot(snap, run.frame, T_hat, mp);
    int inside = 0;
    for (double y : w.nodes) inside += std::abs(y) <= y_fit;
    if (inside < 5) continue;
    const ProfileFit fit = fit_profile_b_selfsimilar(w, y_fit, mp);
    double dist = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(w.nodes[i]) > y_fit) continue;
      dist = std::max(dist, std::abs(w.values[i] - eval_profile(w.nodes[i], fit.b, mp).f));
    }
    rep.points.push_back({snap.time, static_cast<double>(tau), dist, fit.b, fit.flat});
  }
  if (rep.points.size() < 10)
    throw DomainError("compare_profile: fewer than 10 usable snapshots");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& pt : rep.points) {
    if (!(pt.distance > 0) || !(pt.tau > 0)) continue;
    const double x = std::log(pt.tau), y = std::log(pt.distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    const double den = m * sxx - sx * sx;
    if (den > 0) rep.loglog_slope = (m * sxy - sx * sy) / den;
  }
  return rep;
}

}  // namespace blowup
