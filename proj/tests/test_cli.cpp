// End-to-end tests of the landau-chaos executable: exit-code contract,
// artifact layout, byte-identical reruns, and worker-count invariance.
// The binary path is baked in at configure time (LANDAU_CHAOS_BIN).

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "landau/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_root() {
  static const fs::path root =
      fs::temp_directory_path() / ("landau_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(root);
  return root;
}

RunResult run_shell(const std::string& command) {
  const fs::path root = scratch_root();
  const fs::path out = root / "stdout.txt";
  const fs::path err = root / "stderr.txt";
  const std::string cmd = command + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = landau::read_text_file(out.string());
  r.err = landau::read_text_file(err.string());
  return r;
}

RunResult run_cli(const std::string& args) {
  return run_shell(std::string(LANDAU_CHAOS_BIN) + " " + args);
}

bool same_file_bytes(const fs::path& a, const fs::path& b) {
  return landau::read_text_file(a.string()) == landau::read_text_file(b.string());
}

}  // namespace

TEST_CASE("missing or unknown experiment exits with code 1") {
  CHECK(run_cli("").exit_code == 1);
  const RunResult r = run_cli("frobnicate");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("unknown experiment") != std::string::npos);
}

TEST_CASE("config diagnostics are reported together and exit with code 1") {
  const RunResult r = run_cli("conserve --dt -1 --no_such_key 3");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("no_such_key") != std::string::npos);
  CHECK(r.err.find("dt must be > 0") != std::string::npos);
}

TEST_CASE("malformed overrides exit with code 1") {
  CHECK(run_cli("conserve --dt").exit_code == 1);        // missing value
  CHECK(run_cli("conserve stray_token").exit_code == 1); // not a --key
}

TEST_CASE("a run writes results, plotdata and manifest; reruns are byte-identical") {
  const fs::path a = scratch_root() / "rerun_a";
  const fs::path b = scratch_root() / "rerun_b";
  const std::string common =
      "conserve --t_end 0.05 --events 200 --checkpoints 3 --output_dir ";
  CHECK(run_cli(common + a.string()).exit_code == 0);
  CHECK(run_cli(common + b.string()).exit_code == 0);

  REQUIRE(fs::exists(a / "results.csv"));
  REQUIRE(fs::exists(a / "manifest.json"));
  REQUIRE(fs::exists(a / "plotdata"));
  CHECK(same_file_bytes(a / "results.csv", b / "results.csv"));
  int plot_files = 0;
  for (const auto& entry : fs::directory_iterator(a / "plotdata")) {
    ++plot_files;
    CHECK(same_file_bytes(entry.path(), b / "plotdata" / entry.path().filename()));
  }
  CHECK(plot_files > 0);

  // The manifest echoes the effective config and the outputs; only the
  // wall-clock field may differ between the two runs.
  json ma = json::parse(landau::read_text_file((a / "manifest.json").string()));
  json mb = json::parse(landau::read_text_file((b / "manifest.json").string()));
  CHECK(ma["experiment"] == "conserve");
  CHECK(ma["config"]["events"] == 200);
  CHECK(ma["assertions"].size() == 4);
  ma.erase("wall_clock_seconds");
  mb.erase("wall_clock_seconds");
  ma["config"].erase("output_dir");
  mb["config"].erase("output_dir");
  CHECK(ma == mb);
}

TEST_CASE("--assert escalates failed acceptance gates to exit code 2") {
  const fs::path dir = scratch_root() / "assert_fail";
  // Wide kernels sit far from the diffusive limit, so the tight-gap gate
  // cannot hold; without --assert the run still exits 0 and reports FAIL.
  const std::string common = "grazing --eps_list [1.5,1.2] --output_dir " + dir.string();
  const RunResult plain = run_cli(common);
  CHECK(plain.exit_code == 0);
  CHECK(plain.out.find("FAIL") != std::string::npos);
  CHECK(run_cli(common + " --assert").exit_code == 2);
}

TEST_CASE("worker count never changes output bytes") {
  const fs::path serial = scratch_root() / "threads_serial";
  const fs::path pooled = scratch_root() / "threads_pooled";
  const fs::path via_env = scratch_root() / "threads_env";
  const std::string common =
      "chaos-sweep --n_list [8,16] --n_ref 64 --realizations 6 --observable_time 0.02 "
      "--output_dir ";
  CHECK(run_cli(common + serial.string() + " --threads 1").exit_code == 0);
  CHECK(run_cli(common + pooled.string() + " --threads 3").exit_code == 0);
  CHECK(run_shell("LANDAU_CHAOS_THREADS=2 " + std::string(LANDAU_CHAOS_BIN) + " " + common +
                  via_env.string())
            .exit_code == 0);  // env var path; std::system runs through sh
  CHECK(same_file_bytes(serial / "results.csv", pooled / "results.csv"));
  CHECK(same_file_bytes(serial / "results.csv", via_env / "results.csv"));
  for (const auto& entry : fs::directory_iterator(serial / "plotdata")) {
    CHECK(same_file_bytes(entry.path(), pooled / "plotdata" / entry.path().filename()));
    CHECK(same_file_bytes(entry.path(), via_env / "plotdata" / entry.path().filename()));
  }
}

TEST_CASE("config file keys apply and command-line overrides win") {
  const fs::path dir = scratch_root() / "config_file";
  const fs::path cfg_path = scratch_root() / "config.json";
  json cfg = {{"experiment", "conserve"}, {"t_end", 0.2},    {"events", 300},
              {"checkpoints", 3},         {"seed", 42},      {"output_dir", dir.string()}};
  landau::write_text_file(cfg_path.string(), cfg.dump());

  const RunResult r = run_cli("--config " + cfg_path.string() + " --t_end 0.05");
  CHECK(r.exit_code == 0);
  const json manifest = json::parse(landau::read_text_file((dir / "manifest.json").string()));
  CHECK(manifest["experiment"] == "conserve");
  CHECK(manifest["config"]["t_end"] == 0.05);  // flag beats file
  CHECK(manifest["config"]["events"] == 300);  // file beats defaults
  CHECK(manifest["config"]["seed"] == 42);

  // A config file whose JSON is broken is a config error.
  landau::write_text_file(cfg_path.string(), "{not json");
  CHECK(run_cli("--config " + cfg_path.string()).exit_code == 1);
}
