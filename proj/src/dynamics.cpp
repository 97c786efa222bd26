#include "blowup/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blowup/errors.hpp"

namespace blowup {

namespace {

double beta_of(double s, int k) {
  const double I = scale_factor(s, k);
  return 1.0 / (I * I);
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void fill_remainder(SimState& st, const DynamicsConfig& cfg, const ModelParams& mp) {
  auto& dec = st.dec;
  const int N = mp.M_floor;
  const int J = N + static_cast<int>(dec.tail.size());
  const double beta = beta_of(st.s, mp.k);
  if (dec.remainder.nodes.empty())
    dec.remainder.nodes = uniform_nodes(-cfg.y_max, cfg.y_max, static_cast<std::size_t>(cfg.nodes));
  dec.remainder.values.assign(dec.remainder.nodes.size(), 0.0);
  for (std::size_t i = 0; i < dec.remainder.nodes.size(); ++i) {
    const auto h = scaled_hermite_all(J, dec.remainder.nodes[i], beta);
    double v = 0.0;
    for (std::size_t j = 0; j < dec.tail.size(); ++j) v += dec.tail[j] * h[N + 1 + j];
    dec.remainder.values[i] = v;
  }
}

}  // namespace

int tail_degree(const DynamicsConfig& cfg, const ModelParams& mp) {
  if (cfg.tail_degree > 0) {
    if (cfg.tail_degree <= mp.M_floor) throw DomainError("tail_degree must exceed M_floor");
    return cfg.tail_degree;
  }
  return std::max(32, mp.M_floor + 24);
}

ModalRates modal_rates(const std::vector<double>& coeffs, double b, double s, const ModelParams& mp,
                       const DynamicsConfig& cfg) {
  const int J = static_cast<int>(coeffs.size()) - 1;
  ModalRates out;
  out.rates.resize(coeffs.size());
  for (int m = 0; m <= J; ++m) out.rates[m] = (1.0 - m / (2.0 * mp.k)) * coeffs[m];
  if (cfg.linear_only) return out;
  const auto t = project_terms_series(coeffs, b, s, J, mp, cfg.ops);
  const auto sol = bprime_from_projections(t, mp, cfg.ops);
  out.bprime = sol.bprime;
  for (int m = 0; m <= J; ++m)
    out.rates[m] += t.nonlinear[m] + t.drift[m] + t.residual[m] + sol.bprime * t.modulation[m];
  return out;
}

SimState make_state(double s, double b, std::vector<double> coeffs, const DynamicsConfig& cfg,
                    const ModelParams& mp) {
  const int N = mp.M_floor;
  const int J = tail_degree(cfg, mp);
  coeffs.resize(static_cast<std::size_t>(J) + 1, 0.0);
  SimState st;
  st.s = s;
  st.b = b;
  st.dec.s = s;
  st.dec.modes.assign(coeffs.begin(), coeffs.begin() + N + 1);
  st.dec.tail.assign(coeffs.begin() + N + 1, coeffs.end());
  fill_remainder(st, cfg, mp);
  return st;
}

SimState init_state(const std::vector<double>& d, const DynamicsConfig& cfg, const ModelParams& mp) {
  const int n = 2 * mp.k;
  if (static_cast<int>(d.size()) != n)
    throw DomainError("init_state: expected " + std::to_string(n) + " shooting parameters");
  for (double di : d)
    if (!(std::abs(di) <= cfg.box)) throw DomainError("init_state: d outside the admissible box");
  if (!(cfg.b0 > 0)) throw DomainError("init_state: b0 must be positive");
  if (!cfg.linear_only && !series_valid(2.0 * cfg.b0, cfg.s0, mp))
    throw DomainError("init_state: s0 too small for the modal projections (I(s0) too small)");
  const double amp = std::pow(scale_factor(cfg.s0, mp.k), -cfg.delta);
  std::vector<double> mono(n, 0.0);
  for (int i = 0; i < n; ++i) mono[i] = d[i] * amp;
  auto herm = monomial_to_hermite(mono, beta_of(cfg.s0, mp.k));
  return make_state(cfg.s0, cfg.b0, std::move(herm), cfg, mp);
}

namespace {

SimState rk4(const SimState& st, double ds, const ModalRates& k1, const ModelParams& mp,
             const DynamicsConfig& cfg) {
  const auto c0 = st.dec.coefficients();
  const std::size_t n = c0.size();
  auto shifted = [&](const ModalRates& r, double h, std::vector<double>& c) {
    c.resize(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = c0[i] + h * r.rates[i];
    return st.b + h * r.bprime;
  };
  std::vector<double> c;
  double b = shifted(k1, 0.5 * ds, c);
  const auto k2 = modal_rates(c, b, st.s + 0.5 * ds, mp, cfg);
  b = shifted(k2, 0.5 * ds, c);
  const auto k3 = modal_rates(c, b, st.s + 0.5 * ds, mp, cfg);
  b = shifted(k3, ds, c);
  const auto k4 = modal_rates(c, b, st.s + ds, mp, cfg);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = c0[i] + ds / 6.0 * (k1.rates[i] + 2.0 * k2.rates[i] + 2.0 * k3.rates[i] + k4.rates[i]);
  const double bn = st.b + ds / 6.0 * (k1.bprime + 2.0 * k2.bprime + 2.0 * k3.bprime + k4.bprime);
  if (!all_finite(out) || !std::isfinite(bn)) throw NumericalError("step: non-finite state");
  out[2 * mp.k] = 0.0;  // drift correction
  SimState next = make_state(st.s + ds, bn, std::move(out), cfg, mp);
  return next;
}

}  // namespace

SimState step(const SimState& st, double ds, const ModelParams& mp, const DynamicsConfig& cfg) {
  if (!(ds >= 0.0) || ds > 0.1) throw DomainError("step: ds must lie in [0, 0.1]");
  if (!all_finite(st.dec.coefficients()) || !std::isfinite(st.b))
    throw NumericalError("step: non-finite state");
  if (ds == 0.0) return st;
  const auto k1 = modal_rates(st.dec.coefficients(), st.b, st.s, mp, cfg);
  return rk4(st, ds, k1, mp, cfg);
}

MembershipReport membership(const SimState& st, double delta, double b0, const ModelParams& mp,
                            double hysteresis) {
  const double I = scale_factor(st.s, mp.k);
  const double bound = std::pow(I, -delta);
  const double neutral_bound = std::pow(I, -2.0 * delta);
  MembershipReport rep;
  for (int m = 0; m < static_cast<int>(st.dec.modes.size()); ++m) {
    const double bd = m == 2 * mp.k ? neutral_bound : bound;
    rep.margins.push_back({m, bd - std::abs(st.dec.modes[m])});
  }
  rep.margins.push_back(
      {kRemainderBound, bound - remainder_seminorm(st.dec.remainder, st.s, mp)});
  rep.margins.push_back({kBLowerBound, st.b - 0.5 * b0});
  rep.margins.push_back({kBUpperBound, 2.0 * b0 - st.b});
  rep.worst_margin = rep.margins.front().margin;
  for (const auto& m : rep.margins) {
    rep.worst_margin = std::min(rep.worst_margin, m.margin);
    if (!(m.margin >= -hysteresis)) rep.violations.push_back(m);
  }
  rep.inside = rep.violations.empty();
  return rep;
}

namespace {

TrajectorySample make_sample(const SimState& st, double bprime, const MembershipReport& mem,
                             const ModelParams& mp) {
  TrajectorySample smp;
  smp.s = st.s;
  smp.b = st.b;
  smp.bprime = bprime;
  smp.modes = st.dec.modes;
  smp.qminus = remainder_seminorm(st.dec.remainder, st.s, mp);
  smp.inside = mem.inside;
  return smp;
}

}  // namespace

TrajectoryRecord run(const SimState& st0, double s_max, const ModelParams& mp,
                     const DynamicsConfig& cfg) {
  if (!(s_max > st0.s)) throw DomainError("run: s_max must exceed the initial time");
  TrajectoryRecord rec;
  SimState cur = st0;
  ModalRates r = modal_rates(cur.dec.coefficients(), cur.b, cur.s, mp, cfg);
  MembershipReport mem = membership(cur, cfg.delta, cfg.b0, mp, cfg.hysteresis);
  rec.samples.push_back(make_sample(cur, r.bprime, mem, mp));

  auto set_exit = [&](const SimState& a, const MembershipReport& ma, const ModalRates& ra,
                      const SimState& bst, const MembershipReport& mb, const ModalRates& rb,
                      bool immediate) {
    int pick = kNoExit;
    double theta_best = 2.0;
    for (const auto& v : mb.violations) {
      double theta = 0.0;
      if (!immediate) {
        double prev = 0.0;
        for (const auto& m : ma.margins)
          if (m.bound == v.bound) prev = m.margin;
        theta = prev - v.margin != 0.0 ? std::clamp(prev / (prev - v.margin), 0.0, 1.0) : 1.0;
      }
      // identifier order: modes ascending, then remainder, b lower, b upper
      auto rank = [](int id) { return id >= 0 ? id : 1000 - id; };
      if (theta < theta_best - 1e-15 ||
          (std::abs(theta - theta_best) <= 1e-15 && rank(v.bound) < rank(pick))) {
        theta_best = theta;
        pick = v.bound;
      }
    }
    ExitInfo ex;
    ex.mode = pick;
    const double th = immediate ? 0.0 : theta_best;
    const SimState& base = immediate ? bst : a;
    ex.s_star = base.s + th * (bst.s - base.s);
    ex.modes.resize(bst.dec.modes.size());
    for (std::size_t m = 0; m < ex.modes.size(); ++m)
      ex.modes[m] = (1.0 - th) * base.dec.modes[m] + th * bst.dec.modes[m];
    ex.b = (1.0 - th) * base.b + th * bst.b;
    const ModalRates& r0 = immediate ? rb : ra;
    if (pick >= 0) {
      ex.omega = ex.modes[pick] >= 0 ? 1 : -1;
      ex.rate = (1.0 - th) * r0.rates[pick] + th * rb.rates[pick];
    } else if (pick == kBLowerBound || pick == kBUpperBound) {
      ex.omega = pick == kBUpperBound ? 1 : -1;
      ex.rate = (1.0 - th) * r0.bprime + th * rb.bprime;
    } else {
      ex.omega = 1;
      ex.rate = 0.0;
    }
    ex.transversal = ex.omega * ex.rate > 0.0;
    rec.exit = ex;
    rec.samples.back().exit_mode = pick;
  };

  if (!mem.inside) {
    set_exit(cur, mem, r, cur, mem, r, true);
    return rec;
  }
  const long nsteps = static_cast<long>(std::ceil((s_max - st0.s) / cfg.ds - 1e-9));
  for (long i = 0; i < nsteps; ++i) {
    const double h = std::min(cfg.ds, s_max - cur.s);
    if (h <= 0) break;
    SimState next = rk4(cur, h, r, mp, cfg);
    ModalRates rn = modal_rates(next.dec.coefficients(), next.b, next.s, mp, cfg);
    MembershipReport mn = membership(next, cfg.delta, cfg.b0, mp, cfg.hysteresis);
    const bool last = i + 1 == nsteps || !mn.inside;
    if (last || (i + 1) % std::max(cfg.record_every, 1) == 0)
      rec.samples.push_back(make_sample(next, rn.bprime, mn, mp));
    if (!mn.inside) {
      set_exit(cur, mem, r, next, mn, rn, false);
      return rec;
    }
    cur = std::move(next);
    r = std::move(rn);
    mem = std::move(mn);
  }
  return rec;
}

AprioriReport a_priori_diagnostics(const TrajectoryRecord& traj, double delta,
                                   const ModelParams& mp, double s_end) {
  std::vector<const TrajectorySample*> in;
  for (const auto& smp : traj.samples)
    if (smp.inside && smp.s <= s_end + 1e-12) in.push_back(&smp);
  if (in.size() < 10) throw DomainError("a_priori_diagnostics: fewer than 10 in-set samples");
  AprioriReport rep;
  rep.samples_used = static_cast<int>(in.size());
  const int nm = static_cast<int>(in.front()->modes.size());
  rep.C1_by_mode.assign(nm, 0.0);
  const double s0 = in.front()->s;
  const double qm0 = in.front()->qminus;
  for (std::size_t i = 0; i < in.size(); ++i) {
    const auto& smp = *in[i];
    const double I = scale_factor(smp.s, mp.k);
    rep.C2 = std::max(rep.C2, std::abs(smp.bprime) * std::pow(I, delta));
    const double env = std::exp(-(smp.s - s0) / (mp.p - 1.0)) * qm0 + std::pow(I, -2.0 * delta);
    rep.C3 = std::max(rep.C3, smp.qminus / env);
    if (i == 0 || i + 1 == in.size()) continue;
    const auto& a = *in[i - 1];
    const auto& c = *in[i + 1];
    for (int j = 0; j < nm; ++j) {
      const double dq = (c.modes[j] - a.modes[j]) / (c.s - a.s);
      const double res = std::abs(dq - (1.0 - j / (2.0 * mp.k)) * smp.modes[j]) *
                         std::pow(I, 2.0 * delta);
      rep.C1_by_mode[j] = std::max(rep.C1_by_mode[j], res);
      rep.C1 = std::max(rep.C1, res);
    }
  }
  return rep;
}

}  // namespace blowup
