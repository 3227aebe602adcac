// Experiment orchestration behind the landau-chaos CLI: a flat JSON-backed
// config, eight named experiments driving the core library, and in-memory
// artifacts (results.csv, plotdata tables, pass/fail assertions) that the CLI
// serializes.  Everything is deterministic in config.seed: realization r of
// an ensemble always runs on substream(seed, r), so worker count never
// changes a byte of output.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace landau {

struct ExperimentConfig {
  std::string experiment;

  // Model.
  int d = 3;
  double lambda = 1.0;
  double energy = 3.0;

  // Ensemble shape.
  int n = 64;
  std::vector<int> n_list;
  int n_ref = 4096;
  int realizations = 1;

  // Time stepping / checkpoints.
  double dt = 1e-3;
  double t_end = 1.0;
  int checkpoints = 11;
  double observable_time = 0.25;
  std::int64_t events = 100000;  // Kac event budget (conserve)
  // Dense early grid for the W2 decay fit (equilibrate): the distance to a
  // fixed equilibrium sample bottoms out at its finite-sample floor long
  // before t_end, so the slope is measured where the signal lives.
  int w2_checkpoints = 11;
  double w2_t_end = 0.1;

  // Grazing kernels.
  double eps = 0.1;
  std::vector<double> eps_list;

  // Consistency sweep.
  int samples_per_n = 50;

  // Metrics.
  int s = 2;
  int xi_count = 2000;
  int bootstrap = 200;
  int k_nn = 1;
  int entropy_subsamples = 32;

  // Initial laws: "equilibrium" | "anisotropic" | "bimodal".
  std::string initial = "anisotropic";
  std::string initial_y = "bimodal";
  std::vector<double> p0_diag = {2.0, 0.5, 0.5};
  std::vector<double> bimodal_center = {1.2, 0.0, 0.0};

  // Run control.
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 0;  // 0: LANDAU_CHAOS_THREADS, else 1

  static const std::vector<std::string>& known_experiments();
  // Per-experiment defaults (the documented acceptance-scale parameters).
  static ExperimentConfig defaults_for(const std::string& experiment);

  // Overlay JSON fields onto this config; unknown keys and type mismatches
  // are reported, not thrown.
  std::vector<std::string> apply_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Schema and cross-field checks; empty result means runnable.
  std::vector<std::string> validate() const;
};

struct AssertionOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  std::string results_csv;  // experiment-specific documented header
  std::vector<std::pair<std::string, std::string>> plotdata;  // file -> x,y,yerr csv
  std::vector<AssertionOutcome> assertions;
  nlohmann::json summary;
};

// Dispatch on cfg.experiment.  Throws std::invalid_argument on config errors
// (callers should validate() first) and propagates numerical failures.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Effective worker count: cfg.threads if positive, else LANDAU_CHAOS_THREADS,
// else 1.
int resolve_threads(const ExperimentConfig& cfg);

// Write results.csv, plotdata/*.csv and manifest.json under cfg.output_dir;
// returns the list of files written (relative to output_dir).
std::vector<std::string> write_artifacts(const ExperimentConfig& cfg,
                                         const ExperimentResult& result,
                                         double wall_clock_seconds);

}  // namespace landau
