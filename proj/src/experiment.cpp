#include "blowup/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "blowup/errors.hpp"
#include "blowup/parallel.hpp"
#include "blowup/verification.hpp"

namespace blowup {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Tolerances {
  static constexpr double orthogonality = 1e-8;
  static constexpr double jordan = 1e-8;
  static constexpr double product = 1e-10;
  static constexpr double multiplier = 1e-5;
  static constexpr double semigroup = 1e-4;
  static constexpr double mass = 1e-8;
  static constexpr double manufactured = 1e-6;
  static constexpr double blowup_time = 1e-2;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string artifact(const fs::path& dir, const std::string& name) {
  return fs::absolute(dir / name).lexically_normal().string();
}

double fit_window(const RunConfig& cfg, const ModelParams& mp) {
  return cfg.fit_window > 0 ? cfg.fit_window : default_fit_window(cfg.b0, mp);
}

Certificate survivor_for(const RunConfig& cfg, const ModelParams& mp, std::ostream& log) {
  if (!cfg.survivor_manifest.empty()) {
    const Manifest m = manifest_from_json(read_text(cfg.survivor_manifest));
    const auto it = m.artifacts.find("certificate");
    if (it == m.artifacts.end())
      throw ConfigError("survivor_manifest: " + cfg.survivor_manifest + " lists no certificate");
    log << "using survivor from " << it->second << "\n";
    return load_certificate(it->second);
  }
  log << "no survivor_manifest given; running the shooting search\n";
  return search(shoot_config(cfg), mp);
}

TrendConfig trend_config(const RunConfig& cfg, const ModelParams& mp, const Certificate& c) {
  TrendConfig tc;
  tc.b0 = cfg.b0;
  tc.s0 = c.s0;
  tc.delta = cfg.delta;
  tc.span = cfg.w_span;
  tc.domain = cfg.w_domain;
  tc.nodes = cfg.w_nodes;
  tc.ds = cfg.w_ds;
  tc.fit_window = fit_window(cfg, mp);
  return tc;
}

json trend_json(const TrendReport& t) {
  return {{"termination", t.termination},
          {"distance_nonincreasing_last_half", t.distance_nonincreasing},
          {"b_increments", t.b_increments},
          {"increments_shrinking", t.increments_shrinking},
          {"final_distance", t.distance.empty() ? 0.0 : t.distance.back()}};
}

std::string trend_csv(const TrendReport& t) {
  std::string out = "s,log_tau,distance,log_distance,b\n";
  for (std::size_t i = 0; i < t.s.size(); ++i)
    out += fmt(t.s[i]) + "," + fmt(-t.s[i]) + "," + fmt(t.distance[i]) + "," +
           fmt(std::log(t.distance[i])) + "," + fmt(t.b[i]) + "\n";
  return out;
}

int verify_spectral(const RunConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const SpectralReport sp = spectral_suite({2, 3}, {2.0, 10.0, 30.0}, 12, 2, cfg.quad_order);
  const MehlerReport me = mehler_suite(cfg.k, 2.0, {0.1, 0.5, 1.0, 2.0, 3.0}, 8, cfg.quad_order);
  const bool ok = sp.orthogonality < Tolerances::orthogonality && sp.jordan < Tolerances::jordan &&
                  sp.product < Tolerances::product && me.multiplier < Tolerances::multiplier &&
                  me.semigroup < Tolerances::semigroup && me.mass < Tolerances::mass;
  json rep = {{"orthogonality_max", sp.orthogonality}, {"jordan_max", sp.jordan},
              {"product_max", sp.product},             {"mehler_multiplier_max", me.multiplier},
              {"mehler_semigroup_max", me.semigroup},  {"mehler_mass_max", me.mass},
              {"checks", sp.checks},                    {"pass", ok}};
  write_text(artifact(dir, "report.json"), rep.dump(2));
  man.artifacts["report"] = artifact(dir, "report.json");
  man.summary_json = rep.dump();
  log << "max orthogonality error " << sp.orthogonality << "\n"
      << "max Jordan-action error " << sp.jordan << "\n"
      << "max product-identity error " << sp.product << "\n"
      << "Mehler multiplier/semigroup/mass " << me.multiplier << " " << me.semigroup << " "
      << me.mass << "\n";
  return ok ? kExitOk : kExitAcceptance;
}

int simulate(const RunConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const ModelParams mp = model_params(cfg);
  const DynamicsConfig dyn = dynamics_config(cfg);
  std::vector<double> d = cfg.d;
  if (d.empty()) d.assign(2 * mp.k, 0.0);
  const SimState st = init_state(d, dyn, mp);
  const TrajectoryRecord rec = run(st, cfg.s0 + cfg.horizon, mp, dyn);
  write_trajectory_csv(rec, mp.M_floor, artifact(dir, "trajectory.csv"));
  man.artifacts["trajectory"] = artifact(dir, "trajectory.csv");
  json sum = {{"samples", rec.samples.size()}, {"b_final", rec.samples.back().b},
              {"survived", !rec.exit.has_value()}};
  if (rec.exit) {
    sum["exit"] = {{"s_star", rec.exit->s_star}, {"mode", rec.exit->mode},
                   {"omega", rec.exit->omega}, {"rate", rec.exit->rate},
                   {"transversal", rec.exit->transversal}};
    log << "exit through bound " << rec.exit->mode << " at s=" << rec.exit->s_star << "\n";
  } else {
    log << "stayed in the shrinking set up to s=" << rec.samples.back().s << "\n";
  }
  try {
    const AprioriReport ap = a_priori_diagnostics(rec, cfg.delta, mp);
    sum["a_priori"] = {{"C1", ap.C1}, {"C2", ap.C2}, {"C3", ap.C3}};
  } catch (const DomainError&) {
    sum["a_priori"] = nullptr;
  }
  man.summary_json = sum.dump();
  return kExitOk;
}

int shoot(const RunConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const ModelParams mp = model_params(cfg);
  const ShootConfig sc = shoot_config(cfg);
  try {
    const Certificate c = search(sc, mp);
    save_certificate(c, artifact(dir, "certificate.json"));
    man.artifacts["certificate"] = artifact(dir, "certificate.json");
    const ExitMapResult r = exit_map(c.d_star, sc, mp);
    write_trajectory_csv(r.trajectory, mp.M_floor, artifact(dir, "survivor.csv"));
    man.artifacts["trajectory"] = artifact(dir, "survivor.csv");
    json sum = {{"d_star", c.d_star}, {"worst_margin", c.worst_margin},
                {"b_drift_last_half", c.b_drift_last_half}, {"trajectories", c.trajectories},
                {"horizon_residual", c.horizon_residual}};
    man.summary_json = sum.dump();
    log << "survivor d* =";
    for (double v : c.d_star) log << " " << fmt(v);
    log << "\nworst margin " << c.worst_margin << ", b drift " << c.b_drift_last_half << "\n";
    return kExitOk;
  } catch (const SearchFailure& e) {
    json best = {{"best_d", e.best_d}, {"message", e.what()}};
    if (e.best_exit) best["best_exit"] = {{"s_star", e.best_exit->s_star}, {"mode", e.best_exit->mode}};
    write_text(artifact(dir, "best_candidate.json"), best.dump(2));
    man.artifacts["best_candidate"] = artifact(dir, "best_candidate.json");
    throw;
  }
}

int direct(const RunConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const ModelParams mp = model_params(cfg);
  json sum;
  if (cfg.direct_initial == "survivor") {
    const Certificate c = survivor_for(cfg, mp, log);
    const TrendReport t = survivor_trend(c.d_star, mp, trend_config(cfg, mp, c));
    write_text(artifact(dir, "w_compare.csv"), trend_csv(t));
    man.artifacts["comparison"] = artifact(dir, "w_compare.csv");
    sum = trend_json(t);
    man.summary_json = sum.dump();
    log << "w-run " << t.termination << ", final distance "
        << (t.distance.empty() ? 0.0 : t.distance.back()) << "\n";
    return t.termination == "horizon" ? kExitOk : kExitNumerical;
  }

  const double T = cfg.blowup_time;
  ScalarFn u0;
  if (cfg.direct_initial == "constant") {
    const double level = mp.kappa * std::pow(T, -1.0 / (mp.p - 1));
    u0 = [level](double) { return level; };
  } else if (cfg.direct_initial == "profile") {
    const double amp = std::pow(T, -1.0 / (mp.p - 1)), inv = std::pow(T, -1.0 / (2 * mp.k));
    u0 = [amp, inv, &mp, &cfg](double x) { return amp * eval_profile(x * inv, cfg.b0, mp).f; };
  } else {
    const double a = cfg.bump_amplitude;
    u0 = [a](double x) { return a * std::exp(-x * x); };
  }
  USolverConfig uc;
  uc.safety = cfg.u_safety;
  uc.threshold = cfg.u_threshold;
  const PdeRun run = solve_u_physical(
      sample_uniform(-cfg.u_domain, cfg.u_domain, static_cast<std::size_t>(cfg.u_nodes), u0),
      cfg.u_t_max, mp, uc);
  sum["termination"] = to_string(run.termination);
  sum["wall_gradient"] = run.wall_gradient;
  std::string hist = "t,sup\n";
  for (const auto& h : run.history)
    hist += fmt(static_cast<double>(h.time)) + "," + fmt(h.sup) + "\n";
  write_text(artifact(dir, "history.csv"), hist);
  man.artifacts["history"] = artifact(dir, "history.csv");
  log << "u-run terminated by " << to_string(run.termination) << "\n";
  if (run.termination == Termination::Instability) {
    man.summary_json = sum.dump();
    throw NumericalError("u-run unstable: " + run.message);
  }
  if (run.termination == Termination::BlowupThreshold) {
    const BlowupEstimate est = estimate_blowup_time(run, mp);
    sum["T_hat"] = static_cast<double>(est.T_hat);
    sum["fit_residual"] = est.residual;
    log << "estimated blowup time " << fmt(static_cast<double>(est.T_hat)) << "\n";
    try {
      const ComparisonReport cmp = compare_profile(run, est.T_hat, mp, fit_window(cfg, mp));
      std::string out = "t,log_tau,distance,log_distance,b,flat\n";
      for (const auto& pt : cmp.points)
        out += fmt(static_cast<double>(pt.time)) + "," + fmt(std::log(pt.tau)) + "," +
               fmt(pt.distance) + "," + fmt(std::log(pt.distance)) + "," + fmt(pt.b) + "," +
               (pt.flat ? "1" : "0") + "\n";
      write_text(artifact(dir, "compare.csv"), out);
      man.artifacts["comparison"] = artifact(dir, "compare.csv");
      sum["loglog_slope"] = cmp.loglog_slope;
    } catch (const DomainError& e) {
      sum["comparison"] = e.what();
    }
  }
  man.summary_json = sum.dump();
  return kExitOk;
}

int compare(const RunConfig& cfg, const fs::path& dir, Manifest& man, std::ostream& log) {
  const ModelParams mp = model_params(cfg);
  ManufacturedReport manuf;
  TrendReport trend;
  BlowupTimeReport bt;
  std::optional<Certificate> cert;
  cert = survivor_for(cfg, mp, log);
  parallel_for(3, cfg.jobs, [&](std::size_t i) {
    if (i == 0) manuf = manufactured_check(mp, cfg.b0, cfg.blowup_time);
    if (i == 1) trend = survivor_trend(cert->d_star, mp, trend_config(cfg, mp, *cert));
    if (i == 2) bt = blowup_time_check(mp, cfg.blowup_time);
  });
  write_text(artifact(dir, "w_compare.csv"), trend_csv(trend));
  man.artifacts["comparison"] = artifact(dir, "w_compare.csv");
  std::vector<std::string> failed;
  if (!(manuf.max_distance < Tolerances::manufactured && manuf.max_b_error < Tolerances::manufactured))
    failed.push_back("manufactured-profile");
  if (!trend.distance_nonincreasing) failed.push_back("survivor-distance-trend");
  if (!trend.increments_shrinking) failed.push_back("survivor-b-increments");
  if (!(bt.relative_error < Tolerances::blowup_time && bt.deterministic)) failed.push_back("blowup-time");
  json sum = {{"manufactured", {{"max_distance", manuf.max_distance}, {"max_b_error", manuf.max_b_error}}},
              {"survivor", trend_json(trend)},
              {"blowup_time", {{"T_hat", static_cast<double>(bt.T_hat)},
                               {"relative_error", bt.relative_error},
                               {"deterministic", bt.deterministic}}},
              {"failed", failed}};
  write_text(artifact(dir, "compare.json"), sum.dump(2));
  man.artifacts["report"] = artifact(dir, "compare.json");
  man.summary_json = sum.dump();
  for (const auto& f : failed) log << "FAILED " << f << "\n";
  if (failed.empty()) log << "all theorem-level checks passed\n";
  return failed.empty() ? kExitOk : kExitAcceptance;
}

}  // namespace

int run_experiment(const std::string& subcommand, const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  Manifest man;
  man.subcommand = subcommand;
  man.config_json = config_to_json(cfg);
  man.version = kVersion;
  man.seed = cfg.seed;
  const fs::path dir = fs::path(cfg.output_dir) / subcommand;
  int code = kExitOk;
  try {
    validate(cfg);
    fs::create_directories(dir);
    if (subcommand == "verify-spectral") code = verify_spectral(cfg, dir, man, log);
    else if (subcommand == "simulate") code = simulate(cfg, dir, man, log);
    else if (subcommand == "shoot") code = shoot(cfg, dir, man, log);
    else if (subcommand == "direct") code = direct(cfg, dir, man, log);
    else if (subcommand == "compare") code = compare(cfg, dir, man, log);
    else throw ConfigError("unknown subcommand '" + subcommand + "'");
    man.status = code == kExitOk ? "ok" : "acceptance-failure";
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    code = kExitConfig;
    man.status = std::string("config-error: ") + e.what();
  } catch (const DomainError& e) {
    log << "precondition violated: " << e.what() << "\n";
    code = kExitConfig;
    man.status = std::string("precondition: ") + e.what();
  } catch (const NumericalError& e) {
    log << "numerical failure: " << e.what() << "\n";
    code = kExitNumerical;
    man.status = std::string("numerical-failure: ") + e.what();
  } catch (const std::runtime_error& e) {
    log << "error: " << e.what() << "\n";
    code = kExitNumerical;
    man.status = std::string("error: ") + e.what();
  }
  man.exit_code = code;
  man.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_text((dir / "manifest.json").string(), manifest_to_json(man));
  } catch (const std::exception& e) {
    log << "could not write manifest: " << e.what() << "\n";
    if (code == kExitOk) code = kExitNumerical;
  }
  return code;
}

}  // namespace blowup
