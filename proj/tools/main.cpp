// landau-chaos: run one named experiment from a JSON config, with every
// config key overridable on the command line.
//
//   landau-chaos <experiment> [--config FILE] [--key value ...] [--assert]
//
// Exit codes: 0 run completed (assertions reported but not enforced),
// 1 configuration/runtime errors, 2 an assertion failed under --assert.

#include <chrono>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "json.hpp"
#include "landau/io.hpp"

namespace {

using nlohmann::json;

// "--key value" pairs left over after CLI11 takes its own flags.  Values are
// parsed as JSON when possible (numbers, arrays, booleans) and fall back to
// plain strings, so --initial bimodal and --n_list [8,16] both work.
int overrides_from_extras(const std::vector<std::string>& extras, json& out,
                          std::string& error) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& key = extras[i];
    if (key.rfind("--", 0) != 0 || key.size() <= 2) {
      error = "unrecognized argument '" + key + "' (overrides look like --key value)";
      return 1;
    }
    if (i + 1 >= extras.size()) {
      error = "override '" + key + "' is missing a value";
      return 1;
    }
    const std::string& raw = extras[++i];
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // unquoted strings arrive as-is
    }
    out[key.substr(2)] = value;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic particle experiments for the homogeneous Landau dynamics"};
  app.allow_extras();

  std::string config_path;
  bool enforce = false;
  app.add_option("--config", config_path, "JSON config file (flat key/value object)");
  app.add_flag("--assert", enforce, "exit 2 if any acceptance assertion fails");
  app.footer("experiments: conserve grazing consistency chaos-sweep contraction-w2 "
             "contraction-fourier equilibrate entropy\n"
             "usage: landau-chaos <experiment> [--config FILE] [--key value ...] [--assert]");

  CLI11_PARSE(app, argc, argv);

  // The experiment name is the leading bare token.  It is not a CLI11
  // positional: a positional would swallow the value of the first unknown
  // --key override whenever the name comes from the config file instead.
  std::string experiment_arg;
  std::vector<std::string> extras = app.remaining();
  if (!extras.empty() && extras.front().rfind("--", 0) != 0) {
    experiment_arg = extras.front();
    extras.erase(extras.begin());
  }

  json file_json = json::object();
  if (!config_path.empty()) {
    try {
      file_json = json::parse(landau::read_text_file(config_path));
    } catch (const std::exception& e) {
      std::cerr << "config: cannot load '" << config_path << "': " << e.what() << "\n";
      return 1;
    }
  }

  json overrides = json::object();
  {
    std::string error;
    if (overrides_from_extras(extras, overrides, error) != 0) {
      std::cerr << "config: " << error << "\n";
      return 1;
    }
  }

  std::string name = experiment_arg;
  if (name.empty() && file_json.contains("experiment") && file_json["experiment"].is_string())
    name = file_json["experiment"].get<std::string>();
  if (name.empty() && overrides.contains("experiment") && overrides["experiment"].is_string())
    name = overrides["experiment"].get<std::string>();
  if (name.empty()) {
    std::cerr << "config: no experiment given (positional argument or \"experiment\" key)\n";
    return 1;
  }

  landau::ExperimentConfig cfg = landau::ExperimentConfig::defaults_for(name);
  std::vector<std::string> diags = cfg.apply_json(file_json);
  {
    const auto more = cfg.apply_json(overrides);
    diags.insert(diags.end(), more.begin(), more.end());
  }
  cfg.experiment = name;  // the positional argument wins over config keys
  {
    const auto more = cfg.validate();
    diags.insert(diags.end(), more.begin(), more.end());
  }
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << d << "\n";
    return 1;
  }

  landau::ExperimentResult result;
  double wall = 0;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    result = landau::run_experiment(cfg);
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception& e) {
    std::cerr << cfg.experiment << ": " << e.what() << "\n";
    return 1;
  }

  std::vector<std::string> files;
  try {
    files = landau::write_artifacts(cfg, result, wall);
  } catch (const std::exception& e) {
    std::cerr << "output: " << e.what() << "\n";
    return 1;
  }

  std::cout << cfg.experiment << ": " << files.size() << " files under " << cfg.output_dir
            << " (" << landau::format_double(wall) << " s)\n";
  bool all_pass = true;
  for (const auto& a : result.assertions) {
    all_pass = all_pass && a.pass;
    std::cout << (a.pass ? "  PASS " : "  FAIL ") << a.name << ": " << a.detail << "\n";
  }
  if (enforce && !all_pass) return 2;
  return 0;
}
