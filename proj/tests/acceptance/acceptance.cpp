// Acceptance driver: one PASS/FAIL line per criterion. Exit status 4 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "blowup/dynamics.hpp"
#include "blowup/experiment.hpp"
#include "blowup/io.hpp"
#include "blowup/parallel.hpp"
#include "blowup/shooting.hpp"
#include "blowup/verification.hpp"

using namespace blowup;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances.
constexpr double kOrthogonality = 1e-8;
constexpr double kJordan = 1e-8;
constexpr double kProduct = 1e-10;
constexpr double kSpectralSeconds = 30.0;
constexpr double kMultiplier = 1e-5;
constexpr double kSemigroup = 1e-4;
constexpr double kMass = 1e-8;
constexpr double kConsistency = 1e-6;
constexpr double kDoublingRatio = 3.5;
constexpr double kWindowRatio = 2.0;
constexpr double kContractionExponent = 0.4;
constexpr double kDriftBound = 0.1;
constexpr double kLinearOrigin = 1e-6;
constexpr double kShootSeconds = 600.0;
constexpr double kManufactured = 1e-6;
constexpr double kBlowupTime = 1e-2;
constexpr double kTransversalFraction = 0.95;
constexpr int kMinExits = 50;
constexpr int kAprioriRuns = 10;
constexpr double kAprioriSpread = 1e-8;  // trajectories stay well inside the set
constexpr double kAprioriWideSpread = 1e-6;  // reported only
constexpr int kExitBatch = 64;
constexpr int kMaxExitDraws = 4096;

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", v[i]);
    out += buf;
  }
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_artifacts";
  std::filesystem::create_directories(out);
  const ModelParams mp = make_params(3.0, 2);
  const int jobs = std::max(1u, std::thread::hardware_concurrency());

  {
    const auto t0 = Clock::now();
    const auto sp = spectral_suite({2, 3}, {2.0, 10.0, 30.0}, 12);
    const double secs = seconds_since(t0);
    report(1, "spectral identities",
           sp.orthogonality < kOrthogonality && sp.jordan < kJordan && sp.product < kProduct &&
               secs < kSpectralSeconds,
           fmt("orthogonality %.3g, jordan %.3g, product %.3g, %.2f s", sp.orthogonality, sp.jordan,
               sp.product, secs));
  }

  {
    const auto me = mehler_suite(2, 2.0, {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, 8);
    report(2, "Mehler kernel",
           me.multiplier < kMultiplier && me.semigroup < kSemigroup && me.mass < kMass,
           fmt("multiplier %.3g, semigroup %.3g, mass %.3g", me.multiplier, me.semigroup, me.mass));
  }

  {
    OperatorOptions derived;
    const auto frozen = consistency_suite(mp, 20, 4096, 20.0, 1.0, 0.0, derived, 7);
    const auto moving = consistency_suite(mp, 20, 4096, 20.0, 1.0, 0.3, derived, 7);
    OperatorOptions stated = derived;
    stated.modulation = CoefficientForm::Stated;
    const auto moving_stated = consistency_suite(mp, 20, 4096, 20.0, 1.0, 0.3, stated, 7);
    const bool ok = frozen.max_residual < kConsistency && frozen.min_ratio >= kDoublingRatio;
    report(3, "derivation consistency", ok,
           fmt("frozen-b residual %.3g, doubling ratio %.2f; moving-b residual derived %.3g, stated %.3g",
               frozen.max_residual, frozen.min_ratio, moving.max_residual,
               moving_stated.max_residual));
  }

  // Survivor first: criteria 4, 5 and 8b use it.
  ShootConfig shoot;
  Certificate cert;
  bool have_cert = false;
  double shoot_secs = 0;
  {
    const auto t0 = Clock::now();
    try {
      cert = search(shoot, mp);
      have_cert = true;
      save_certificate(cert, (out / "certificate.json").string());
    } catch (const SearchFailure& e) {
      std::printf("  shooting failed: %s\n", e.what());
    }
    shoot_secs = seconds_since(t0);
  }

  struct AprioriWindows {
    double c1_short = 0, c1_long = 0, c2_short = 0, c2_long = 0;
    double b_lo = 1e300, b_hi = -1e300;
    int survived = 0;
  };
  auto apriori = [&](double spread) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::vector<double>> ds(kAprioriRuns);
    for (auto& d : ds) {
      d = cert.d_star;
      for (double& v : d) v += spread * unit(rng);
    }
    std::vector<AprioriReport> shortw(kAprioriRuns), longw(kAprioriRuns);
    std::vector<TrajectoryRecord> trajs(kAprioriRuns);
    parallel_for(kAprioriRuns, jobs, [&](std::size_t i) {
      trajs[i] = exit_map(ds[i], shoot, mp).trajectory;
      shortw[i] = a_priori_diagnostics(trajs[i], shoot.dyn.delta, mp, shoot.dyn.s0 + 5.0);
      longw[i] = a_priori_diagnostics(trajs[i], shoot.dyn.delta, mp, shoot.dyn.s0 + 10.0);
    });
    AprioriWindows w;
    for (int i = 0; i < kAprioriRuns; ++i) {
      w.c1_short = std::max(w.c1_short, shortw[i].C1);
      w.c1_long = std::max(w.c1_long, longw[i].C1);
      w.c2_short = std::max(w.c2_short, shortw[i].C2);
      w.c2_long = std::max(w.c2_long, longw[i].C2);
      if (!trajs[i].exit) ++w.survived;
      for (const auto& smp : trajs[i].samples) {
        if (!smp.inside) continue;
        w.b_lo = std::min(w.b_lo, smp.b);
        w.b_hi = std::max(w.b_hi, smp.b);
      }
    }
    return w;
  };

  if (have_cert) {
    const auto w = apriori(kAprioriSpread);
    const double c1_ratio = w.c1_long / w.c1_short, c2_ratio = w.c2_long / w.c2_short;
    report(4, "a-priori mode residual", c1_ratio < kWindowRatio,
           fmt("window ratio %.3f over %.0f runs (%.0f survived the horizon), max %.3g", c1_ratio,
               kAprioriRuns, w.survived, w.c1_long));
    const double b0 = shoot.dyn.b0;
    report(5, "modulation smallness",
           c2_ratio < kWindowRatio && w.b_lo >= 0.75 * b0 && w.b_hi <= 1.25 * b0,
           fmt("window ratio %.3f, max %.3g, b in [%.9f, %.9f]", c2_ratio, w.c2_long, w.b_lo,
               w.b_hi));
    const auto wide = apriori(kAprioriWideSpread);
    std::printf("  note: spread %.0e gives mode ratio %.3f, modulation ratio %.3f, modulation max %.3g\n",
                kAprioriWideSpread, wide.c1_long / wide.c1_short, wide.c2_long / wide.c2_short,
                wide.c2_long);
  } else {
    report(4, "a-priori mode residual", false, "no survivor");
    report(5, "modulation smallness", false, "no survivor");
  }

  {
    const auto cs = contraction_study(mp, 6.0, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    report(6, "remainder contraction", cs.exponent >= kContractionExponent,
           fmt("fitted exponent %.3f", cs.exponent));
  }

  {
    ShootConfig lin = shoot;
    lin.dyn.linear_only = true;
    lin.box_center = {0.3, -0.2, 0.1, 0.05};
    lin.box_halfwidth = 1.0;
    double origin = 1e300;
    try {
      const auto c = search(lin, mp);
      origin = 0;
      for (double v : c.d_star) origin = std::max(origin, std::abs(v));
    } catch (const SearchFailure&) {
    }
    const bool ok = have_cert && cert.worst_margin > 0 && cert.b_drift_last_half <= kDriftBound &&
                    origin < kLinearOrigin && shoot_secs < kShootSeconds;
    report(7, "shooting end-to-end", ok,
           have_cert ? fmt("worst margin %.3g, b drift %.3g, linear |d*| %.3g, %.1f s",
                           cert.worst_margin, cert.b_drift_last_half, origin, shoot_secs)
                     : std::string("no survivor"));
    if (have_cert) std::printf("  d* = %s\n", join(cert.d_star).c_str());
  }

  {
    ManufacturedReport manuf;
    TrendReport trend;
    BlowupTimeReport bt;
    parallel_for(3, jobs, [&](std::size_t i) {
      if (i == 0) manuf = manufactured_check(mp, 1.0, 0.1);
      if (i == 1 && have_cert) {
        TrendConfig tc;
        tc.s0 = cert.s0;
        trend = survivor_trend(cert.d_star, mp, tc);
      }
      if (i == 2) bt = blowup_time_check(mp, 0.1);
    });
    report(8, "profile trend (manufactured)",
           manuf.max_distance < kManufactured && manuf.max_b_error < kManufactured,
           fmt("distance %.3g, b error %.3g over %.0f snapshots", manuf.max_distance,
               manuf.max_b_error, manuf.snapshots));
    std::string incs;
    for (double v : trend.b_increments) incs += fmt(" %.3g", v);
    report(8, "profile trend (survivor)",
           have_cert && trend.distance_nonincreasing && trend.increments_shrinking,
           "distance non-increasing " + std::string(trend.distance_nonincreasing ? "yes" : "no") +
               ", b increments" + incs + ", " + trend.termination);
    report(9, "blowup time", bt.relative_error < kBlowupTime && bt.deterministic,
           fmt("T_hat %.12f, relative error %.3g, deterministic %.0f", static_cast<double>(bt.T_hat),
               bt.relative_error, bt.deterministic ? 1.0 : 0.0));
  }

  {
    int counted = 0, transversal = 0, draws = 0, breakdowns = 0;
    std::map<int, int> by_bound;
    std::ofstream log(out / "transversality_counterexamples.txt");
    for (std::uint64_t batch = 0; counted < kMinExits && draws < kMaxExitDraws; ++batch) {
      const auto samples = sample_exits(shoot, mp, kExitBatch, 1.0, 99 + 1000 * batch, jobs);
      draws += kExitBatch;
      for (const auto& smp : samples) {
        const auto& ex = smp.result.exit;
        if (!smp.breakdown.empty()) {
          ++breakdowns;
          continue;
        }
        ++by_bound[ex ? ex->mode : kNoExit];
        if (!ex || ex->mode < 0 || ex->mode >= 2 * mp.k) continue;
        ++counted;
        if (ex->transversal) {
          ++transversal;
          continue;
        }
        const std::string line = "d=" + join(smp.d) + " s*=" + fmt("%.17g", ex->s_star) +
                                 " mode=" + std::to_string(ex->mode) +
                                 " omega=" + std::to_string(ex->omega) +
                                 fmt(" rate=%.17g b=%.17g", ex->rate, ex->b) +
                                 " modes=" + join(ex->modes);
        log << line << "\n";
        std::printf("  counterexample: %s\n", line.c_str());
      }
    }
    std::string hist;
    for (auto [bound, n] : by_bound) hist += " " + std::to_string(bound) + ":" + std::to_string(n);
    std::printf("  exits by bound over %d draws:%s; modulation breakdowns %d\n", draws, hist.c_str(),
                breakdowns);
    const double frac = counted ? static_cast<double>(transversal) / counted : 0.0;
    report(10, "exit transversality", counted >= kMinExits && frac >= kTransversalFraction,
           fmt("%.0f of %.0f low-mode exits transversal (%.1f%%)", transversal, counted, 100 * frac));
  }

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? kExitAcceptance : 0;
}
