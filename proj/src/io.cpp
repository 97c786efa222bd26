#include "blowup/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "blowup/errors.hpp"

namespace blowup {

using nlohmann::json;

namespace {

struct KeySpec {
  std::string name;
  std::function<void(RunConfig&, const json&)> set;
  std::function<json(const RunConfig&)> get;
};

template <class T>
T as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_integer()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("");
    } else {
      if (!v.is_array()) throw ConfigError("");
      for (const auto& e : v)
        if (!e.is_number()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    const char* what = std::is_same_v<T, double>          ? "a number"
                       : std::is_same_v<T, bool>          ? "a boolean"
                       : std::is_same_v<T, std::string>   ? "a string"
                       : std::is_same_v<T, std::vector<double>> ? "an array of numbers"
                                                          : "an integer";
    throw ConfigError("key '" + key + "' expects " + what);
  }
}

#define BLOWUP_KEY(field, type)                                                  \
  KeySpec {                                                                      \
    #field, [](RunConfig& c, const json& v) { c.field = as<type>(v, #field); },  \
        [](const RunConfig& c) { return json(c.field); }                         \
  }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      BLOWUP_KEY(p, double),
      BLOWUP_KEY(k, int),
      BLOWUP_KEY(b0, double),
      BLOWUP_KEY(delta, double),
      BLOWUP_KEY(s0, double),
      BLOWUP_KEY(ds, double),
      BLOWUP_KEY(horizon, double),
      BLOWUP_KEY(y_max, double),
      BLOWUP_KEY(nodes, int),
      BLOWUP_KEY(quad_order, int),
      BLOWUP_KEY(tail_degree, int),
      BLOWUP_KEY(linear_only, bool),
      BLOWUP_KEY(residual_form, std::string),
      BLOWUP_KEY(modulation_form, std::string),
      BLOWUP_KEY(d, std::vector<double>),
      BLOWUP_KEY(box_halfwidth, double),
      BLOWUP_KEY(box_center, std::vector<double>),
      BLOWUP_KEY(depth, int),
      BLOWUP_KEY(even_only, bool),
      BLOWUP_KEY(polish_iterations, int),
      BLOWUP_KEY(direct_initial, std::string),
      BLOWUP_KEY(w_domain, double),
      BLOWUP_KEY(w_nodes, int),
      BLOWUP_KEY(w_ds, double),
      BLOWUP_KEY(w_span, double),
      BLOWUP_KEY(u_domain, double),
      BLOWUP_KEY(u_nodes, int),
      BLOWUP_KEY(u_t_max, double),
      BLOWUP_KEY(u_safety, double),
      BLOWUP_KEY(u_threshold, double),
      BLOWUP_KEY(blowup_time, double),
      BLOWUP_KEY(bump_amplitude, double),
      BLOWUP_KEY(fit_window, double),
      BLOWUP_KEY(output_dir, std::string),
      BLOWUP_KEY(survivor_manifest, std::string),
      BLOWUP_KEY(seed, std::uint64_t),
      BLOWUP_KEY(jobs, int),
  };
  return table;
}

#undef BLOWUP_KEY

const KeySpec* find_key(const std::string& name) {
  for (const auto& ks : key_table())
    if (ks.name == name) return &ks;
  return nullptr;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

int line_of_key(const std::string& text, const std::string& key) {
  const std::size_t pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

CoefficientForm form_of(const std::string& s) {
  return s == "stated" ? CoefficientForm::Stated : CoefficientForm::Derived;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& ks : key_table()) out.push_back(ks.name);
  return out;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ":" + std::to_string(line_of_offset(text, e.byte ? e.byte - 1 : 0)) +
                      ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw ConfigError(origin + ":1: top level must be a JSON object");
  RunConfig cfg;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const int line = line_of_key(text, it.key());
    const KeySpec* ks = find_key(it.key());
    if (!ks) throw ConfigError(origin + ":" + std::to_string(line) + ": unknown key '" + it.key() + "'");
    try {
      ks->set(cfg, it.value());
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line) + ": " + e.what());
    }
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    // point at the key named in the message when possible
    std::string msg = e.what();
    int line = 0;
    for (const auto& ks : key_table())
      if (msg.rfind(ks.name + ":", 0) == 0) line = line_of_key(text, ks.name);
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ":0: cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  const KeySpec* ks = find_key(key);
  if (!ks) throw ConfigError("--" + key + ": unknown key");
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = value;  // bare string
  }
  try {
    ks->set(cfg, v);
  } catch (const ConfigError& e) {
    throw ConfigError("--" + key + ": " + e.what());
  }
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.p > 1 && c.p <= 20, "p: must lie in (1, 20]");
  need(c.k >= 2 && c.k <= 6, "k: must lie in [2, 6]");
  need(c.b0 > 0 && c.b0 <= 100, "b0: must lie in (0, 100]");
  need(c.delta > 0 && c.delta < 1, "delta: must lie in (0, 1)");
  need(c.s0 > 0 && c.s0 <= 200, "s0: must lie in (0, 200]");
  need(c.ds > 0 && c.ds <= 0.1, "ds: must lie in (0, 0.1]");
  need(c.horizon > 0 && c.horizon <= 100, "horizon: must lie in (0, 100]");
  need(c.y_max > 0 && c.y_max <= 10, "y_max: must lie in (0, 10]");
  need(c.nodes >= 11 && c.nodes <= 100001, "nodes: must lie in [11, 100001]");
  need(c.quad_order >= 16 && c.quad_order <= 400, "quad_order: must lie in [16, 400]");
  need(c.tail_degree >= 0 && c.tail_degree <= 200, "tail_degree: must lie in [0, 200]");
  need(c.residual_form == "derived" || c.residual_form == "stated",
       "residual_form: must be 'derived' or 'stated'");
  need(c.modulation_form == "derived" || c.modulation_form == "stated",
       "modulation_form: must be 'derived' or 'stated'");
  need(c.d.empty() || static_cast<int>(c.d.size()) == 2 * c.k, "d: must hold 2k entries");
  need(c.box_halfwidth > 0 && c.box_halfwidth <= 10, "box_halfwidth: must lie in (0, 10]");
  need(c.box_center.empty() || static_cast<int>(c.box_center.size()) == 2 * c.k,
       "box_center: must hold 2k entries");
  need(c.depth >= 1 && c.depth <= 60, "depth: must lie in [1, 60]");
  need(c.polish_iterations >= 0 && c.polish_iterations <= 50, "polish_iterations: must lie in [0, 50]");
  need(c.direct_initial == "survivor" || c.direct_initial == "constant" ||
           c.direct_initial == "profile" || c.direct_initial == "bump",
       "direct_initial: must be survivor, constant, profile or bump");
  need(c.w_domain > 0, "w_domain: must be positive");
  need(c.w_nodes >= 12, "w_nodes: must be at least 12");
  need(c.w_ds > 0, "w_ds: must be positive");
  need(c.w_span > 0, "w_span: must be positive");
  need(c.u_domain > 0, "u_domain: must be positive");
  need(c.u_nodes >= 8, "u_nodes: must be at least 8");
  need(c.u_t_max > 0, "u_t_max: must be positive");
  need(c.u_safety > 0 && c.u_safety <= 1, "u_safety: must lie in (0, 1]");
  need(c.u_threshold > 1, "u_threshold: must exceed 1");
  need(c.blowup_time > 0, "blowup_time: must be positive");
  need(c.fit_window >= 0, "fit_window: must be non-negative");
  need(!c.output_dir.empty(), "output_dir: must not be empty");
  need(c.jobs >= 1 && c.jobs <= 256, "jobs: must lie in [1, 256]");
}

std::string config_to_json(const RunConfig& cfg) {
  json j = json::object();
  for (const auto& ks : key_table()) j[ks.name] = ks.get(cfg);
  return j.dump(2);
}

ModelParams model_params(const RunConfig& cfg) { return make_params(cfg.p, cfg.k); }

DynamicsConfig dynamics_config(const RunConfig& cfg) {
  DynamicsConfig d;
  d.delta = cfg.delta;
  d.b0 = cfg.b0;
  d.s0 = cfg.s0;
  d.ds = cfg.ds;
  d.y_max = cfg.y_max;
  d.nodes = cfg.nodes;
  d.tail_degree = cfg.tail_degree;
  d.linear_only = cfg.linear_only;
  d.ops.residual = form_of(cfg.residual_form);
  d.ops.modulation = form_of(cfg.modulation_form);
  d.box = std::max(2.0, cfg.box_halfwidth + [&] {
    double m = 0;
    for (double c : cfg.box_center) m = std::max(m, std::abs(c));
    return m;
  }());
  return d;
}

ShootConfig shoot_config(const RunConfig& cfg) {
  ShootConfig s;
  s.dyn = dynamics_config(cfg);
  s.horizon = cfg.horizon;
  s.box_halfwidth = cfg.box_halfwidth;
  s.box_center = cfg.box_center;
  s.depth = cfg.depth;
  s.even_only = cfg.even_only;
  s.polish_iterations = cfg.polish_iterations;
  return s;
}

std::string trajectory_csv(const TrajectoryRecord& rec, int M_floor) {
  std::string out = "s,b,bprime";
  for (int m = 0; m <= M_floor; ++m) out += ",q_" + std::to_string(m);
  out += ",qminus_seminorm,inside,exit_mode\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
  };
  for (const auto& smp : rec.samples) {
    num(smp.s);
    out += ',';
    num(smp.b);
    out += ',';
    num(smp.bprime);
    for (int m = 0; m <= M_floor; ++m) {
      out += ',';
      num(m < static_cast<int>(smp.modes.size()) ? smp.modes[m] : 0.0);
    }
    out += ',';
    num(smp.qminus);
    out += smp.inside ? ",1," : ",0,";
    out += std::to_string(smp.exit_mode);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write " + path);
  outf << text;
  if (!outf) throw std::runtime_error("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_trajectory_csv(const TrajectoryRecord& rec, int M_floor, const std::string& path) {
  write_text(path, trajectory_csv(rec, M_floor));
}

std::string certificate_to_json(const Certificate& c) {
  json j;
  j["d_star"] = c.d_star;
  j["s0"] = c.s0;
  j["horizon"] = c.horizon;
  j["s_final"] = c.s_final;
  j["b_final"] = c.b_final;
  j["b_drift_last_half"] = c.b_drift_last_half;
  j["worst_margin"] = c.worst_margin;
  j["trajectories"] = c.trajectories;
  j["max_halvings"] = c.max_halvings;
  j["horizon_residual"] = c.horizon_residual;
  j["polish_steps"] = c.polish_steps;
  j["final_margins"] = json::array();
  for (const auto& m : c.final_margins) j["final_margins"].push_back({{"bound", m.bound}, {"margin", m.margin}});
  j["brackets"] = json::array();
  for (const auto& b : c.brackets)
    j["brackets"].push_back({{"lo", b.lo}, {"hi", b.hi}, {"halvings", b.halvings}});
  j["history"] = json::array();
  for (const auto& h : c.history)
    j["history"].push_back({{"d", h.d}, {"survived", h.survived}, {"bound", h.bound},
                            {"omega", h.omega}, {"s_star", h.s_star}});
  return j.dump(2);
}

Certificate certificate_from_json(const std::string& text) {
  Certificate c;
  try {
    const json j = json::parse(text);
    c.d_star = j.at("d_star").get<std::vector<double>>();
    c.s0 = j.at("s0").get<double>();
    c.horizon = j.at("horizon").get<double>();
    c.s_final = j.at("s_final").get<double>();
    c.b_final = j.at("b_final").get<double>();
    c.b_drift_last_half = j.at("b_drift_last_half").get<double>();
    c.worst_margin = j.at("worst_margin").get<double>();
    c.trajectories = j.at("trajectories").get<int>();
    c.max_halvings = j.at("max_halvings").get<int>();
    c.horizon_residual = j.at("horizon_residual").get<double>();
    c.polish_steps = j.at("polish_steps").get<int>();
    for (const auto& m : j.at("final_margins"))
      c.final_margins.push_back({m.at("bound").get<int>(), m.at("margin").get<double>()});
    for (const auto& b : j.at("brackets"))
      c.brackets.push_back({b.at("lo").get<double>(), b.at("hi").get<double>(), b.at("halvings").get<int>()});
    for (const auto& h : j.at("history"))
      c.history.push_back({h.at("d").get<std::vector<double>>(), h.at("survived").get<bool>(),
                           h.at("bound").get<int>(), h.at("omega").get<int>(),
                           h.at("s_star").get<double>()});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("certificate: ") + e.what());
  }
  return c;
}

void save_certificate(const Certificate& c, const std::string& path) {
  write_text(path, certificate_to_json(c));
}

Certificate load_certificate(const std::string& path) { return certificate_from_json(read_text(path)); }

bool operator==(const Certificate& a, const Certificate& b) {
  auto margins_eq = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].bound != y[i].bound || x[i].margin != y[i].margin) return false;
    return true;
  };
  auto brackets_eq = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].lo != y[i].lo || x[i].hi != y[i].hi || x[i].halvings != y[i].halvings) return false;
    return true;
  };
  auto history_eq = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].d != y[i].d || x[i].survived != y[i].survived || x[i].bound != y[i].bound ||
          x[i].omega != y[i].omega || x[i].s_star != y[i].s_star)
        return false;
    return true;
  };
  return a.d_star == b.d_star && a.s0 == b.s0 && a.horizon == b.horizon && a.s_final == b.s_final &&
         a.b_final == b.b_final && a.b_drift_last_half == b.b_drift_last_half &&
         a.worst_margin == b.worst_margin && a.trajectories == b.trajectories &&
         a.max_halvings == b.max_halvings && a.horizon_residual == b.horizon_residual &&
         a.polish_steps == b.polish_steps && margins_eq(a.final_margins, b.final_margins) &&
         brackets_eq(a.brackets, b.brackets) && history_eq(a.history, b.history);
}

std::string manifest_to_json(const Manifest& m) {
  json j;
  j["subcommand"] = m.subcommand;
  j["config"] = json::parse(m.config_json.empty() ? "{}" : m.config_json);
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["wall_time_seconds"] = m.wall_time;
  j["exit_code"] = m.exit_code;
  j["status"] = m.status;
  j["artifacts"] = m.artifacts;
  j["summary"] = json::parse(m.summary_json.empty() ? "{}" : m.summary_json);
  return j.dump(2);
}

Manifest manifest_from_json(const std::string& text) {
  Manifest m;
  try {
    const json j = json::parse(text);
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config_json = j.at("config").dump(2);
    m.version = j.at("version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.wall_time = j.at("wall_time_seconds").get<double>();
    m.exit_code = j.at("exit_code").get<int>();
    m.status = j.at("status").get<std::string>();
    m.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
    m.summary_json = j.at("summary").dump(2);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  return m;
}

}  // namespace blowup
