#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "blowup/errors.hpp"
#include "blowup/experiment.hpp"
#include "blowup/io.hpp"

using namespace blowup;
namespace fs = std::filesystem;

namespace {
fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("blowup_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}
}  // namespace

TEST(Io, TrajectoryCsvHasHeaderAndExactDigits) {
  const auto mp = make_params(3.0, 2);
  DynamicsConfig dc;
  const auto rec = run(init_state({0.01, 0, 0.02, 0}, dc, mp), dc.s0 + 0.5, mp, dc);
  const auto csv = trajectory_csv(rec, mp.M_floor);
  const auto lines = split_lines(csv);
  ASSERT_EQ(lines.size(), rec.samples.size() + 1);
  EXPECT_EQ(lines[0].rfind("s,b,bprime,q_0", 0), 0u);
  EXPECT_NE(lines[0].find("q_5,qminus_seminorm,inside,exit_mode"), std::string::npos);
  // first column round-trips bit for bit
  const double s_back = std::strtod(lines.back().c_str(), nullptr);
  EXPECT_EQ(s_back, rec.samples.back().s);
  const double b_back = std::strtod(lines[1].substr(lines[1].find(',') + 1).c_str(), nullptr);
  EXPECT_EQ(b_back, rec.samples.front().b);
}

TEST(Io, CertificateRoundTrip) {
  Certificate c;
  c.d_star = {1.0 / 3.0, -2e-17, 0.1, 0};
  c.s0 = 20;
  c.horizon = 10;
  c.s_final = 30;
  c.b_final = 1.0000000023;
  c.b_drift_last_half = 2.3e-9;
  c.worst_margin = 0.2234;
  c.max_halvings = 40;
  c.horizon_residual = 1e-12;
  c.polish_steps = 3;
  BoundMargin m;
  m.bound = 0;
  m.margin = 0.5;
  c.final_margins = {m};
  c.brackets = {{-0.5, 0.25, 3}};
  c.history = {{{0.1, 0.2, 0.3, 0.4}, false, 2, 1, 23.5}};
  const auto dir = scratch_dir("cert");
  const auto path = (dir / "c.json").string();
  save_certificate(c, path);
  const auto back = load_certificate(path);
  EXPECT_TRUE(back == c);
  EXPECT_EQ(back.d_star[0], 1.0 / 3.0);
  EXPECT_EQ(back.d_star[1], -2e-17);
}

TEST(Io, UnknownKeyReportsLine) {
  try {
    parse_config("{\n  \"p\": 3,\n  \"bogus\": 1\n}", "f.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("f.json:3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(Io, MalformedJsonAndBadRangesRejected) {
  EXPECT_THROW(parse_config("{ \"p\": 3, ", "x"), ConfigError);
  EXPECT_THROW(parse_config("{ \"p\": \"three\" }", "x"), ConfigError);
  EXPECT_THROW(parse_config("{ \"p\": 1.0 }", "x"), ConfigError);
  EXPECT_THROW(validate(parse_config("{ \"d\": [0, 0] }", "x")), ConfigError);
}

TEST(Io, OverridesAndJsonRoundTrip) {
  RunConfig cfg;
  apply_override(cfg, "depth", "12");
  apply_override(cfg, "output_dir", "somewhere");
  apply_override(cfg, "d", "[0.1, 0, 0, 0]");
  EXPECT_EQ(cfg.depth, 12);
  EXPECT_EQ(cfg.output_dir, "somewhere");
  EXPECT_EQ(cfg.d.size(), 4u);
  EXPECT_THROW(apply_override(cfg, "nope", "1"), ConfigError);
  const auto back = parse_config(config_to_json(cfg));
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  const auto json = config_to_json(cfg);
  for (const auto& key : config_keys()) EXPECT_NE(json.find("\"" + key + "\""), std::string::npos) << key;
}

TEST(Io, ManifestRoundTrip) {
  Manifest m;
  m.subcommand = "shoot";
  m.config_json = config_to_json(RunConfig{});
  m.version = kVersion;
  m.seed = 7;
  m.wall_time = 1.5;
  m.exit_code = 0;
  m.status = "ok";
  m.artifacts["certificate"] = "out/shoot/certificate.json";
  m.summary_json = "{\"worst_margin\":0.2}";
  const auto back = manifest_from_json(manifest_to_json(m));
  EXPECT_EQ(back.subcommand, m.subcommand);
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(back.artifacts, m.artifacts);
  EXPECT_EQ(parse_config(back.config_json).depth, 40);
}

TEST(Io, WriteTextFailsOnUnwritablePath) {
  const auto dir = scratch_dir("unwritable");
  write_text((dir / "file").string(), "x");
  EXPECT_THROW(write_text((dir / "file" / "child").string(), "y"), std::runtime_error);
}

TEST(Io, SimulateIsByteDeterministic) {
  const auto dir = scratch_dir("sim");
  RunConfig cfg;
  cfg.horizon = 1.0;
  cfg.d = {0.01, -0.02, 0.03, 0.0};
  std::ostringstream log;
  cfg.output_dir = (dir / "a").string();
  ASSERT_EQ(run_experiment("simulate", cfg, log), kExitOk);
  cfg.output_dir = (dir / "b").string();
  ASSERT_EQ(run_experiment("simulate", cfg, log), kExitOk);
  const auto a = read_text((dir / "a" / "simulate" / "trajectory.csv").string());
  const auto b = read_text((dir / "b" / "simulate" / "trajectory.csv").string());
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  const auto man = manifest_from_json(read_text((dir / "a" / "simulate" / "manifest.json").string()));
  EXPECT_EQ(man.exit_code, kExitOk);
  EXPECT_EQ(man.version, kVersion);
}

TEST(Io, ExperimentExitCodes) {
  const auto dir = scratch_dir("codes");
  RunConfig cfg;
  cfg.output_dir = dir.string();
  std::ostringstream log;
  EXPECT_EQ(run_experiment("no-such-command", cfg, log), kExitConfig);
  cfg.d = {5, 0, 0, 0};
  EXPECT_EQ(run_experiment("simulate", cfg, log), kExitConfig);
  cfg.d.clear();
  cfg.box_center = {1.5, 0, 0, 0};
  cfg.box_halfwidth = 1e-6;
  cfg.depth = 6;
  EXPECT_EQ(run_experiment("shoot", cfg, log), kExitNumerical);
  EXPECT_TRUE(fs::exists(dir / "shoot" / "best_candidate.json"));
  EXPECT_TRUE(fs::exists(dir / "shoot" / "manifest.json"));
}
