// blowup-lab command-line entry point.
#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "blowup/errors.hpp"
#include "blowup/experiment.hpp"

int main(int argc, char** argv) {
  using namespace blowup;
  CLI::App app{"Flat blowup profile laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<CLI::App*> subs;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-spectral", "Hermite, Jordan-block and Mehler identity suites"},
      {"simulate", "one modulated trajectory from shooting parameters d"},
      {"shoot", "exit-mode bisection for a surviving trajectory"},
      {"direct", "finite-difference runs of the w- or u-equation"},
      {"compare", "theorem-level trend checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON config file");
    for (const std::string& key : config_keys()) {
      std::string flags = "--" + key;
      std::string dashed = key;
      for (char& ch : dashed)
        if (ch == '_') ch = '-';
      if (dashed != key) flags += ",--" + dashed;
      sub->add_option_function<std::string>(
          flags, [&overrides, key](const std::string& v) { overrides[key] = v; },
          "override config key '" + key + "' (JSON literal)");
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  std::string subcommand;
  for (CLI::App* s : subs)
    if (s->parsed()) subcommand = s->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [key, value] : overrides) apply_override(cfg, key, value);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_experiment(subcommand, cfg, std::cerr);
}
