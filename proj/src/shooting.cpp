#include "blowup/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "blowup/hermite.hpp"
#include "blowup/parallel.hpp"

namespace blowup {

std::vector<double> gamma_map(const std::vector<double>& d, double s0, double delta,
                              const ModelParams& mp) {
  const int n = 2 * mp.k;
  if (static_cast<int>(d.size()) != n) throw DomainError("gamma_map: wrong number of parameters");
  const double I = scale_factor(s0, mp.k);
  const double amp = std::pow(I, -delta);
  std::vector<double> mono(n);
  for (int i = 0; i < n; ++i) mono[i] = d[i] * amp;
  std::vector<double> h = monomial_to_hermite(mono, 1.0 / (I * I));
  h.resize(n, 0.0);
  return h;
}

ExitMapResult exit_map(const std::vector<double>& d, const ShootConfig& cfg, const ModelParams& mp) {
  if (!(cfg.horizon > 0)) throw DomainError("exit_map: horizon must be positive");
  SimState st = init_state(d, cfg.dyn, mp);
  ExitMapResult res;
  res.trajectory = run(st, cfg.dyn.s0 + cfg.horizon, mp, cfg.dyn);
  res.exit = res.trajectory.exit;
  res.survived = !res.exit.has_value();
  if (!res.survived) {
    res.s_star = res.exit->s_star;
    const double gain = std::pow(scale_factor(res.s_star, mp.k), cfg.dyn.delta);
    const int n = 2 * mp.k;
    res.phi.assign(n, 0.0);
    for (int i = 0; i < n && i < static_cast<int>(res.exit->modes.size()); ++i)
      res.phi[i] = gain * res.exit->modes[i];
  } else {
    res.s_star = res.trajectory.samples.back().s;
  }
  return res;
}

std::vector<BoundMargin> sample_margins(const TrajectorySample& smp, double delta, double b0,
                                        const ModelParams& mp) {
  const double I = scale_factor(smp.s, mp.k);
  const double bound = std::pow(I, -delta);
  std::vector<BoundMargin> out;
  for (int m = 0; m < static_cast<int>(smp.modes.size()); ++m) {
    const double bd = m == 2 * mp.k ? bound * bound : bound;
    out.push_back({m, bd - std::abs(smp.modes[m])});
  }
  out.push_back({kRemainderBound, bound - smp.qminus});
  out.push_back({kBLowerBound, smp.b - 0.5 * b0});
  out.push_back({kBUpperBound, 2.0 * b0 - smp.b});
  return out;
}

namespace {

bool active(int i, const ShootConfig& cfg) { return !(cfg.even_only && (i % 2 == 1)); }

std::vector<double> midpoint(const std::vector<Bracket>& br) {
  std::vector<double> d(br.size());
  for (std::size_t i = 0; i < br.size(); ++i) d[i] = 0.5 * (br[i].lo + br[i].hi);
  return d;
}

Certificate certify(const std::vector<double>& d, const ExitMapResult& r, const ShootConfig& cfg,
                    const ModelParams& mp) {
  Certificate c;
  c.d_star = d;
  c.s0 = cfg.dyn.s0;
  c.horizon = cfg.horizon;
  const auto& samples = r.trajectory.samples;
  const TrajectorySample& last = samples.back();
  c.s_final = last.s;
  c.b_final = last.b;
  const double s_half = cfg.dyn.s0 + 0.5 * cfg.horizon;
  const auto it = std::min_element(samples.begin(), samples.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.s - s_half) < std::abs(b.s - s_half);
  });
  c.b_drift_last_half = std::abs(last.b - it->b);
  c.final_margins = sample_margins(last, cfg.dyn.delta, cfg.dyn.b0, mp);
  c.worst_margin = c.final_margins.front().margin;
  for (const auto& m : c.final_margins) c.worst_margin = std::min(c.worst_margin, m.margin);
  return c;
}

std::vector<int> active_coords(int n, const ShootConfig& cfg) {
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (active(i, cfg)) idx.push_back(i);
  return idx;
}

// Rescaled shooting modes at the horizon; empty when the run exits.
std::vector<double> horizon_modes(const ExitMapResult& r, const std::vector<int>& idx,
                                  const ShootConfig& cfg, const ModelParams& mp) {
  if (!r.survived) return {};
  const TrajectorySample& last = r.trajectory.samples.back();
  const double gain = std::pow(scale_factor(last.s, mp.k), cfg.dyn.delta);
  std::vector<double> g;
  for (int i : idx) g.push_back(gain * last.modes[i]);
  return g;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Newton iteration on the horizon modes, starting from a survivor.
void polish(Certificate& cert, ExitMapResult& best_run, const ShootConfig& cfg,
            const ModelParams& mp) {
  const int n = 2 * mp.k;
  const std::vector<int> idx = active_coords(n, cfg);
  const int m = static_cast<int>(idx.size());
  std::vector<double> d = cert.d_star;
  std::vector<double> g = horizon_modes(best_run, idx, cfg, mp);
  double res = sup_norm(g);
  cert.horizon_residual = res;
  const double fd = 1e-7 * cfg.box_halfwidth;
  for (int it = 0; it < cfg.polish_iterations && res > 1e-13; ++it) {
    Eigen::MatrixXd J(m, m);
    bool ok = true;
    for (int c = 0; c < m && ok; ++c) {
      std::vector<double> dp = d;
      dp[idx[c]] += fd;
      if (std::abs(dp[idx[c]]) > cfg.dyn.box) dp[idx[c]] -= 2 * fd;
      const double step = dp[idx[c]] - d[idx[c]];
      const std::vector<double> gp = horizon_modes(exit_map(dp, cfg, mp), idx, cfg, mp);
      if (gp.empty()) {
        ok = false;
        break;
      }
      for (int r = 0; r < m; ++r) J(r, c) = (gp[r] - g[r]) / step;
    }
    if (!ok) break;
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) rhs(r) = -g[r];
    const Eigen::VectorXd delta = J.fullPivLu().solve(rhs);
    if (!delta.allFinite()) break;
    std::vector<double> dn = d;
    bool inbox = true;
    for (int c = 0; c < m; ++c) {
      dn[idx[c]] += delta(c);
      inbox = inbox && std::abs(dn[idx[c]]) <= cfg.dyn.box;
    }
    if (!inbox) break;
    ExitMapResult rn = exit_map(dn, cfg, mp);
    const std::vector<double> gn = horizon_modes(rn, idx, cfg, mp);
    if (gn.empty() || !(sup_norm(gn) < res)) break;
    d = dn;
    g = gn;
    res = sup_norm(gn);
    best_run = std::move(rn);
    ++cert.polish_steps;
  }
  if (cert.polish_steps > 0) {
    Certificate fresh = certify(d, best_run, cfg, mp);
    fresh.polish_steps = cert.polish_steps;
    cert = fresh;
  }
  cert.horizon_residual = res;
}

}  // namespace

Certificate search(const ShootConfig& cfg, const ModelParams& mp) {
  const int n = 2 * mp.k;
  if (!(cfg.box_halfwidth > 0)) throw DomainError("search: box half-width must be positive");
  if (cfg.depth < 1) throw DomainError("search: depth must be at least 1");
  if (!cfg.box_center.empty() && static_cast<int>(cfg.box_center.size()) != n)
    throw DomainError("search: box center has the wrong dimension");

  std::vector<Bracket> br(n);
  for (int i = 0; i < n; ++i) {
    const double c = cfg.box_center.empty() ? 0.0 : cfg.box_center[i];
    if (active(i, cfg)) {
      br[i] = {c - cfg.box_halfwidth, c + cfg.box_halfwidth, 0};
    } else {
      br[i] = {0.0, 0.0, cfg.depth};
    }
  }

  std::optional<Certificate> survivor;
  ExitMapResult survivor_run;
  std::vector<ShootStep> history;
  std::vector<double> best_d;
  std::optional<ExitInfo> best_exit;
  double best_s = -1e300;

  auto finish = [&](Certificate c) {
    polish(c, survivor_run, cfg, mp);
    c.brackets = br;
    c.trajectories = static_cast<int>(history.size());
    c.history = history;
    for (const auto& b : br) c.max_halvings = std::max(c.max_halvings, b.halvings);
    return c;
  };

  const int max_runs = n * cfg.depth + 4 * n;
  for (int iter = 0; iter < max_runs; ++iter) {
    const std::vector<double> d = midpoint(br);
    const ExitMapResult r = exit_map(d, cfg, mp);
    ShootStep st{d, r.survived, kNoExit, 0, r.s_star};

    if (r.survived) {
      history.push_back(st);
      survivor = certify(d, r, cfg, mp);
      survivor_run = r;
      if (!cfg.refine) return finish(*survivor);
      const TrajectorySample& last = r.trajectory.samples.back();
      bool moved = false;
      for (int i = 0; i < n; ++i) {
        if (!active(i, cfg) || br[i].halvings >= cfg.depth) continue;
        const double q = i < static_cast<int>(last.modes.size()) ? last.modes[i] : 0.0;
        if (q > 0) br[i].hi = d[i]; else br[i].lo = d[i];
        ++br[i].halvings;
        moved = true;
      }
      if (!moved) return finish(*survivor);
      continue;
    }

    const ExitInfo& ex = *r.exit;
    if (ex.s_star > best_s) {
      best_s = ex.s_star;
      best_d = d;
      best_exit = ex;
    }

    // Pick the coordinate to halve: the exiting mode if it is a shooting mode,
    // otherwise the largest rescaled unstable mode at exit.
    int coord = -1;
    int omega = 0;
    if (ex.mode >= 0 && ex.mode < n && active(ex.mode, cfg) && br[ex.mode].halvings < cfg.depth) {
      coord = ex.mode;
      omega = ex.omega;
    } else {
      double best = -1;
      for (int i = 0; i < n; ++i) {
        if (!active(i, cfg) || br[i].halvings >= cfg.depth) continue;
        const double q = i < static_cast<int>(ex.modes.size()) ? ex.modes[i] : 0.0;
        if (std::abs(q) > best) {
          best = std::abs(q);
          coord = i;
          omega = q >= 0 ? 1 : -1;
        }
      }
    }
    st.bound = ex.mode;
    st.omega = omega;
    history.push_back(st);
    if (coord < 0) break;
    if (omega > 0) br[coord].hi = d[coord]; else br[coord].lo = d[coord];
    ++br[coord].halvings;
  }

  if (survivor) return finish(*survivor);
  throw SearchFailure("search: no surviving trajectory within depth " + std::to_string(cfg.depth) +
                          " (best exit at s=" + std::to_string(best_s) + ")",
                      best_d, best_exit);
}

std::vector<ExitSample> sample_exits(const ShootConfig& cfg, const ModelParams& mp, int n,
                                     double radius, std::uint64_t seed, int jobs) {
  if (n < 0) throw DomainError("sample_exits: negative sample count");
  const int dim = 2 * mp.k;
  std::vector<ExitSample> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> u(-radius, radius);
    out[i].d.resize(dim);
    for (int j = 0; j < dim; ++j)
      out[i].d[j] = (cfg.box_center.empty() ? 0.0 : cfg.box_center[j]) + u(rng);
  }
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    try {
      out[i].result = exit_map(out[i].d, cfg, mp);
    } catch (const ModulationBreakdown& e) {
      out[i].breakdown = e.what();
    }
  });
  return out;
}

}  // namespace blowup
