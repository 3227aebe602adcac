#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "landau/assignment.hpp"
#include "landau/consistency.hpp"
#include "landau/io.hpp"
#include "landau/kac.hpp"
#include "landau/landau_sde.hpp"
#include "landau/metrics.hpp"
#include "landau/model.hpp"
#include "landau/moment_flow.hpp"
#include "landau/observables.hpp"
#include "landau/rng.hpp"
#include "landau/sphere.hpp"
#include "stats.hpp"

namespace landau {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config machinery

const std::vector<std::string>& ExperimentConfig::known_experiments() {
  static const std::vector<std::string> kNames = {
      "conserve",        "grazing",    "consistency", "chaos-sweep",
      "contraction-w2", "contraction-fourier", "equilibrate", "entropy"};
  return kNames;
}

ExperimentConfig ExperimentConfig::defaults_for(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "conserve") {
    c.n = 64;
    c.dt = 1e-3;
    c.t_end = 10.0;  // 1e4 integrator steps
    c.events = 100000;
    c.eps = 0.1;
    c.checkpoints = 11;
  } else if (experiment == "grazing") {
    c.n = 8;
    c.eps_list = {0.4, 0.2, 0.1, 0.05};
  } else if (experiment == "consistency") {
    c.n_list = {8, 16, 32, 64, 128, 256, 512};
    c.samples_per_n = 50;
  } else if (experiment == "chaos-sweep") {
    c.n_list = {16, 64, 256};
    c.n_ref = 4096;
    c.realizations = 400;
    c.dt = 1e-3;
    c.observable_time = 0.25;
    c.initial = "anisotropic";
  } else if (experiment == "contraction-w2") {
    c.n = 1024;
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.checkpoints = 11;
    c.realizations = 1;
    c.initial = "anisotropic";
    c.initial_y = "bimodal";
  } else if (experiment == "contraction-fourier") {
    c.n = 4096;
    c.dt = 5e-3;
    c.t_end = 1.0;
    c.checkpoints = 11;
    c.s = 2;
    c.initial = "anisotropic";
    c.initial_y = "bimodal";
  } else if (experiment == "equilibrate") {
    c.n = 1024;
    c.dt = 1e-3;
    c.t_end = 2.0;
    c.checkpoints = 11;
    c.initial = "bimodal";
  } else if (experiment == "entropy") {
    c.n = 1024;
    c.dt = 1e-3;
    c.t_end = 1.5;
    c.checkpoints = 11;
    c.initial = "anisotropic";
  }
  return c;
}

namespace {

bool get_int(const json& v, int& out) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) return false;
  out = v.get<int>();
  return true;
}

bool get_double(const json& v, double& out) {
  if (!v.is_number()) return false;
  out = v.get<double>();
  return true;
}

bool get_int_list(const json& v, std::vector<int>& out) {
  if (!v.is_array()) return false;
  std::vector<int> tmp;
  for (const auto& e : v) {
    int x;
    if (!get_int(e, x)) return false;
    tmp.push_back(x);
  }
  out = std::move(tmp);
  return true;
}

bool get_double_list(const json& v, std::vector<double>& out) {
  if (!v.is_array()) return false;
  std::vector<double> tmp;
  for (const auto& e : v) {
    double x;
    if (!get_double(e, x)) return false;
    tmp.push_back(x);
  }
  out = std::move(tmp);
  return true;
}

}  // namespace

std::vector<std::string> ExperimentConfig::apply_json(const json& j) {
  std::vector<std::string> diags;
  if (!j.is_object()) {
    diags.push_back("config: top-level JSON value must be an object");
    return diags;
  }
  for (const auto& [key, value] : j.items()) {
    bool ok = true;
    if (key == "experiment") {
      ok = value.is_string();
      if (ok) experiment = value.get<std::string>();
    } else if (key == "d") {
      ok = get_int(value, d);
    } else if (key == "lambda") {
      ok = get_double(value, lambda);
    } else if (key == "energy") {
      ok = get_double(value, energy);
    } else if (key == "n") {
      ok = get_int(value, n);
    } else if (key == "n_list") {
      ok = get_int_list(value, n_list);
    } else if (key == "n_ref") {
      ok = get_int(value, n_ref);
    } else if (key == "realizations") {
      ok = get_int(value, realizations);
    } else if (key == "dt") {
      ok = get_double(value, dt);
    } else if (key == "t_end") {
      ok = get_double(value, t_end);
    } else if (key == "checkpoints") {
      ok = get_int(value, checkpoints);
    } else if (key == "observable_time") {
      ok = get_double(value, observable_time);
    } else if (key == "events") {
      ok = value.is_number_integer() || value.is_number_unsigned();
      if (ok) events = value.get<std::int64_t>();
    } else if (key == "eps") {
      ok = get_double(value, eps);
    } else if (key == "eps_list") {
      ok = get_double_list(value, eps_list);
    } else if (key == "samples_per_n") {
      ok = get_int(value, samples_per_n);
    } else if (key == "s") {
      ok = get_int(value, s);
    } else if (key == "xi_count") {
      ok = get_int(value, xi_count);
    } else if (key == "bootstrap") {
      ok = get_int(value, bootstrap);
    } else if (key == "k_nn") {
      ok = get_int(value, k_nn);
    } else if (key == "entropy_subsamples") {
      ok = get_int(value, entropy_subsamples);
    } else if (key == "initial") {
      ok = value.is_string();
      if (ok) initial = value.get<std::string>();
    } else if (key == "initial_y") {
      ok = value.is_string();
      if (ok) initial_y = value.get<std::string>();
    } else if (key == "p0_diag") {
      ok = get_double_list(value, p0_diag);
    } else if (key == "bimodal_center") {
      ok = get_double_list(value, bimodal_center);
    } else if (key == "seed") {
      ok = value.is_number_integer() || value.is_number_unsigned();
      if (ok) seed = value.get<std::uint64_t>();
    } else if (key == "output_dir") {
      ok = value.is_string();
      if (ok) output_dir = value.get<std::string>();
    } else if (key == "threads") {
      ok = get_int(value, threads);
    } else {
      diags.push_back("config: unknown key '" + key + "'");
      continue;
    }
    if (!ok) diags.push_back("config: key '" + key + "' has the wrong type");
  }
  return diags;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["d"] = d;
  j["lambda"] = lambda;
  j["energy"] = energy;
  j["n"] = n;
  j["n_list"] = n_list;
  j["n_ref"] = n_ref;
  j["realizations"] = realizations;
  j["dt"] = dt;
  j["t_end"] = t_end;
  j["checkpoints"] = checkpoints;
  j["observable_time"] = observable_time;
  j["events"] = events;
  j["eps"] = eps;
  j["eps_list"] = eps_list;
  j["samples_per_n"] = samples_per_n;
  j["s"] = s;
  j["xi_count"] = xi_count;
  j["bootstrap"] = bootstrap;
  j["k_nn"] = k_nn;
  j["entropy_subsamples"] = entropy_subsamples;
  j["initial"] = initial;
  j["initial_y"] = initial_y;
  j["p0_diag"] = p0_diag;
  j["bimodal_center"] = bimodal_center;
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  return j;
}

namespace {

bool known_initial(const std::string& name) {
  return name == "equilibrium" || name == "anisotropic" || name == "bimodal";
}

// Sum of the diagnostics the named initial law needs on top of the shared
// checks (only evaluated for experiments that sample it).
void check_initial(const ExperimentConfig& c, const std::string& kind, const std::string& role,
                   std::vector<std::string>& out) {
  if (!known_initial(kind)) {
    out.push_back(c.experiment + ": " + role + " '" + kind +
                  "' is not one of equilibrium|anisotropic|bimodal");
    return;
  }
  if (kind == "anisotropic") {
    if (int(c.p0_diag.size()) != c.d) {
      out.push_back(c.experiment + ": p0_diag needs exactly d entries");
      return;
    }
    double tr = 0;
    for (double v : c.p0_diag) {
      if (!(v > 0)) out.push_back(c.experiment + ": p0_diag entries must be > 0");
      tr += v;
    }
    if (std::abs(tr - c.energy) > 1e-9 * (1 + c.energy))
      out.push_back(c.experiment + ": p0_diag must sum to energy (got " +
                    format_double(tr) + ", energy " + format_double(c.energy) + ")");
  } else if (kind == "bimodal") {
    if (int(c.bimodal_center.size()) != c.d) {
      out.push_back(c.experiment + ": bimodal_center needs exactly d entries");
      return;
    }
    double c2 = 0;
    for (double v : c.bimodal_center) c2 += v * v;
    if (!(c2 < c.energy))
      out.push_back(c.experiment +
                    ": bimodal_center must satisfy |center|^2 < energy (component variance "
                    "(energy - |center|^2)/d must be positive)");
  }
}

}  // namespace

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> out;
  const auto& names = known_experiments();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    out.push_back("config: unknown experiment '" + experiment + "'");
    return out;
  }
  if (d < 2) out.push_back("config: d must be >= 2");
  if (!(lambda > 0)) out.push_back("config: lambda must be > 0");
  if (!(energy > 0)) out.push_back("config: energy must be > 0");
  if (!(dt > 0)) out.push_back("config: dt must be > 0");
  if (threads < 0) out.push_back("config: threads must be >= 0");
  if (output_dir.empty()) out.push_back("config: output_dir must not be empty");

  const bool uses_time_series = experiment == "contraction-w2" ||
                                experiment == "contraction-fourier" ||
                                experiment == "equilibrate" || experiment == "entropy";
  if (uses_time_series) {
    if (!(t_end > 0)) out.push_back(experiment + ": t_end must be > 0");
    if (checkpoints < 3) out.push_back(experiment + ": checkpoints must be >= 3");
    if (n < 2) out.push_back(experiment + ": n must be >= 2");
  }

  if (experiment == "conserve") {
    if (n < 2) out.push_back("conserve: n must be >= 2");
    if (!(t_end > 0)) out.push_back("conserve: t_end must be > 0");
    if (checkpoints < 2) out.push_back("conserve: checkpoints must be >= 2");
    if (events < 1) out.push_back("conserve: events must be >= 1");
    if (!(eps > 0) || eps > 1.5707963267948966)
      out.push_back("conserve: eps must lie in (0, pi/2]");
    if (d != 3) out.push_back("conserve: the collision process requires d = 3");
  } else if (experiment == "grazing") {
    if (n < 2) out.push_back("grazing: n must be >= 2");
    if (d != 3) out.push_back("grazing: the collision generator requires d = 3");
    if (eps_list.size() < 2)
      out.push_back("grazing: eps_list must contain at least two kernel widths (got " +
                    std::to_string(eps_list.size()) + ")");
    for (double e : eps_list)
      if (!(e > 0) || e > 1.5707963267948966)
        out.push_back("grazing: every eps must lie in (0, pi/2]");
  } else if (experiment == "consistency") {
    if (n_list.size() < 2) out.push_back("consistency: n_list needs at least two sizes");
    for (int m : n_list)
      if (m < 2) out.push_back("consistency: every N must be >= 2");
    if (samples_per_n < 1) out.push_back("consistency: samples_per_n must be >= 1");
  } else if (experiment == "chaos-sweep") {
    if (n_list.size() < 2) out.push_back("chaos-sweep: n_list needs at least two sizes");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      if (n_list[i] < 2) out.push_back("chaos-sweep: every N must be >= 2");
      if (i && n_list[i] <= n_list[i - 1])
        out.push_back("chaos-sweep: n_list must be strictly increasing");
    }
    if (!n_list.empty() && n_ref < 2 * n_list.back())
      out.push_back("chaos-sweep: n_ref must be at least twice the largest N");
    if (realizations < 2) out.push_back("chaos-sweep: realizations must be >= 2");
    if (!(observable_time > 0)) out.push_back("chaos-sweep: observable_time must be > 0");
    check_initial(*this, initial, "initial", out);
  } else if (experiment == "contraction-w2" || experiment == "contraction-fourier") {
    if (realizations < 1) out.push_back(experiment + ": realizations must be >= 1");
    check_initial(*this, initial, "initial", out);
    check_initial(*this, initial_y, "initial_y", out);
    if (experiment == "contraction-fourier") {
      if (s != 2 && s != 4 && s != 6)
        out.push_back("contraction-fourier: s must be one of 2, 4, 6");
      if (xi_count < 16) out.push_back("contraction-fourier: xi_count must be >= 16");
      if (bootstrap < 8) out.push_back("contraction-fourier: bootstrap must be >= 8");
    }
  } else if (experiment == "equilibrate" || experiment == "entropy") {
    if (k_nn < 1) out.push_back(experiment + ": k_nn must be >= 1");
    if (entropy_subsamples < 2) out.push_back(experiment + ": entropy_subsamples must be >= 2");
    check_initial(*this, initial, "initial", out);
  }
  return out;
}

int resolve_threads(const ExperimentConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("LANDAU_CHAOS_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Shared plumbing

namespace {

ModelParams make_params(const ExperimentConfig& cfg) {
  ModelParams p;
  p.d = cfg.d;
  p.lambda = cfg.lambda;
  p.energy = cfg.energy;
  return p;
}

DensitySpec make_density(const ExperimentConfig& cfg, const std::string& kind) {
  const int d = cfg.d;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  if (kind == "equilibrium")
    return DensitySpec::gaussian(zero, (cfg.energy / d) * Eigen::MatrixXd::Identity(d, d));
  if (kind == "anisotropic") {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) cov(a, a) = cfg.p0_diag[std::size_t(a)];
    return DensitySpec::gaussian(zero, cov);
  }
  if (kind == "bimodal") {
    Eigen::VectorXd center(d);
    for (int a = 0; a < d; ++a) center[a] = cfg.bimodal_center[std::size_t(a)];
    const double var = (cfg.energy - center.squaredNorm()) / d;
    return DensitySpec::symmetric_bimodal(center, var);
  }
  throw std::invalid_argument("unknown initial law '" + kind + "'");
}

// Fan realizations out to a fixed-size worker pool.  Work items only write
// into their own output slots, so results are independent of the schedule;
// with more than one worker the nested OpenMP parallelism is disabled to
// avoid oversubscription.
void parallel_realizations(int count, int workers, const std::function<void(int)>& body) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
#ifdef _OPENMP
      omp_set_num_threads(1);
#endif
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= count) break;
        try {
          body(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct CheckpointedRun {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> clouds;
};

// Evenly spaced checkpoints including t=0 and the (stride-rounded) horizon.
CheckpointedRun run_landau_checkpointed(const ParticleState& v0, const ExperimentConfig& cfg,
                                        const ModelParams& params, std::uint64_t sim_seed) {
  const int m = cfg.checkpoints;
  std::int64_t steps = std::llround(cfg.t_end / cfg.dt);
  std::int64_t stride = std::max<std::int64_t>(1, steps / (m - 1));
  steps = stride * (m - 1);

  IntegratorConfig ic;
  ic.dt = cfg.dt;
  ic.steps = steps;
  ic.enforce_sphere = true;
  ic.record_stride = stride;
  ic.seed = sim_seed;
  const TrajectoryRecord rec = simulate(v0, ic, params);
  return {rec.snapshot_times, rec.snapshots};
}

struct ValueSe {
  double value = 0;
  double se = 0;
};

// Exact W2 between equal-size clouds with a delta-method std-error: the
// matched squared costs are averaged, so se(W2^2) = sd(costs)/sqrt(n) and
// se(W2) = se(W2^2) / (2 W2).
ValueSe w2_with_se(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const int n = int(x.cols());
  Eigen::MatrixXd cost(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cost(i, j) = (x.col(i) - y.col(j)).squaredNorm();
  const AssignmentResult asn = solve_assignment(cost);
  std::vector<double> matched(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) matched[std::size_t(i)] = cost(i, asn.row_to_col[std::size_t(i)]);
  ValueSe out;
  const double w2sq = mean_of(matched);
  out.value = std::sqrt(w2sq);
  const double se_sq = sample_sd(matched) / std::sqrt(double(n));
  out.se = out.value > 0 ? se_sq / (2 * out.value) : 0.0;
  return out;
}

ValueSe knn_with_se(const Eigen::MatrixXd& cloud, const ExperimentConfig& cfg,
                    std::uint64_t jitter_seed, std::uint64_t subsample_seed) {
  ValueSe out;
  out.value = knn_entropy(cloud, cfg.k_nn, jitter_seed);
  const int k = cfg.k_nn;
  out.se = subsampled_std_error(
      cloud,
      [k, jitter_seed](const Eigen::MatrixXd& sub) { return knn_entropy(sub, k, jitter_seed); },
      cfg.entropy_subsamples, subsample_seed);
  return out;
}

std::string xy_csv(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& yerr) {
  CsvTable t("x,y,yerr");
  for (std::size_t i = 0; i < x.size(); ++i) t.add_numeric_row({x[i], y[i], yerr[i]});
  return t.str();
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) ? char(std::tolower(c)) : '_');
  return out;
}

void push_assert(ExperimentResult& res, const std::string& name, bool pass,
                 const std::string& detail) {
  res.assertions.push_back({name, pass, detail});
}

json seeds_json(std::uint64_t base, int count) {
  json arr = json::array();
  for (int r = 0; r < count; ++r) arr.push_back(substream(base, std::uint64_t(r)));
  return arr;
}

// ---------------------------------------------------------------------------
// conserve: pathwise invariants of both particle systems

ExperimentResult exp_conserve(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);

  BoltzmannSphereSpec spec;
  spec.n = cfg.n;
  spec.params = params;
  const ParticleState state0 = sample_uniform_sphere(spec, substream(cfg.seed, 1));

  // Diffusion leg.
  IntegratorConfig ic;
  ic.dt = cfg.dt;
  ic.steps = std::llround(cfg.t_end / cfg.dt);
  ic.enforce_sphere = true;
  ic.seed = substream(cfg.seed, 2);
  const TrajectoryRecord rec = simulate(state0, ic, params);

  const double e_ref = rec.energy_log.front();
  double landau_e = 0, landau_m = 0;
  for (std::size_t k = 0; k < rec.energy_log.size(); ++k) {
    landau_e = std::max(landau_e, std::abs(rec.energy_log[k] - e_ref) / e_ref);
    landau_m = std::max(landau_m, rec.momentum_log.col(Eigen::Index(k)).norm());
  }

  // Jump-process leg: fixed event budget, horizon sized with slack so the
  // budget (not the clock) ends the run.
  const GrazingKernel kernel = GrazingKernel::uniform_family(cfg.eps, cfg.lambda);
  const double rate = 0.5 * (cfg.n - 1) * kernel.total_mass;
  const double t_kac = 1.25 * double(cfg.events) / rate;
  KacOptions opts;
  opts.log_events = false;
  opts.track_conservation = true;
  opts.max_events = cfg.events;
  for (int k = 0; k < cfg.checkpoints; ++k)
    opts.checkpoints.push_back(t_kac * k / (cfg.checkpoints - 1));
  const KacRecord krec = simulate_kac(state0, t_kac, kernel, substream(cfg.seed, 3), opts);

  const double e0_raw = state0.v.squaredNorm() / cfg.n;
  const double kac_e = krec.max_energy_drift / e0_raw;
  const double kac_m = krec.max_momentum_drift;

  const double bound_e = 1e-12;
  const double bound_m = 1e-12 * std::sqrt(e_ref);

  CsvTable table(
      "process,updates,max_relative_energy_drift,max_momentum_drift,relative_energy_bound,"
      "momentum_bound");
  table.add_row({"landau", std::to_string(ic.steps), format_double(landau_e),
                 format_double(landau_m), format_double(bound_e), format_double(bound_m)});
  table.add_row({"kac", std::to_string(krec.event_count), format_double(kac_e),
                 format_double(kac_m), format_double(bound_e), format_double(bound_m)});
  res.results_csv = table.str();

  // Drift curves: thin the per-step log, one point per Kac checkpoint.
  {
    const std::size_t total = rec.energy_log.size();
    const std::size_t stride = std::max<std::size_t>(1, total / 512);
    std::vector<double> x, ye, ym, zero;
    for (std::size_t k = 0; k < total; k += stride) {
      x.push_back(rec.times[k]);
      ye.push_back(std::abs(rec.energy_log[k] - e_ref) / e_ref);
      ym.push_back(rec.momentum_log.col(Eigen::Index(k)).norm());
      zero.push_back(0.0);
    }
    res.plotdata.emplace_back("conserve_landau_energy.csv", xy_csv(x, ye, zero));
    res.plotdata.emplace_back("conserve_landau_momentum.csv", xy_csv(x, ym, zero));
  }
  {
    std::vector<double> x, y, zero;
    for (std::size_t k = 0; k < krec.snapshots.size(); ++k) {
      x.push_back(krec.snapshot_times[k]);
      y.push_back(std::abs(krec.snapshots[k].squaredNorm() / cfg.n - e0_raw) / e0_raw);
      zero.push_back(0.0);
    }
    res.plotdata.emplace_back("conserve_kac_energy.csv", xy_csv(x, y, zero));
  }

  push_assert(res, "landau_energy_drift", landau_e <= bound_e,
              format_double(landau_e) + " <= " + format_double(bound_e));
  push_assert(res, "landau_momentum_drift", landau_m <= bound_m,
              format_double(landau_m) + " <= " + format_double(bound_m));
  push_assert(res, "kac_energy_drift", kac_e <= bound_e,
              format_double(kac_e) + " <= " + format_double(bound_e));
  push_assert(res, "kac_momentum_drift", kac_m <= bound_m,
              format_double(kac_m) + " <= " + format_double(bound_m));

  res.summary = {{"landau_energy_drift", landau_e},
                 {"landau_momentum_drift", landau_m},
                 {"kac_energy_drift", kac_e},
                 {"kac_momentum_drift", kac_m},
                 {"kac_events", krec.event_count},
                 {"landau_steps", ic.steps}};
  return res;
}

// ---------------------------------------------------------------------------
// grazing: jump-generator convergence to the diffusion generator

ExperimentResult exp_grazing(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);

  BoltzmannSphereSpec spec;
  spec.n = cfg.n;
  spec.params = params;
  const ParticleState state = sample_uniform_sphere(spec, substream(cfg.seed, 1));

  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(3);
  c1[0] = 0.5;
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(3);
  c2[1] = 0.5;

  std::vector<TestFunction> library;
  library.push_back(momentum_sum(0, 3));
  library.push_back(energy_sum(3));
  library.push_back(psi_of_total_energy([](double x) { return x * x; },
                                        [](double x) { return 2 * x; },
                                        [](double) { return 2.0; }, "total_energy_squared"));
  library.push_back(sum_observable(gaussian_bump(c1, 1.0)));
  library.push_back(sum_observable(damped_monomial({2, 1, 0})));
  library.push_back(mean_product(gaussian_bump(c2, 1.2), squared_norm(3)));
  library.push_back(pair_coordinate_product(0, 0, 1, 1, 3));
  // The first three are pathwise conserved by both processes.
  const std::size_t conserved_count = 3;

  std::vector<double> eps_sorted = cfg.eps_list;
  std::sort(eps_sorted.begin(), eps_sorted.end(), std::greater<double>());

  CsvTable table("function,eps,gap,landau_ref,slope,conserved");
  json summary_rows = json::array();
  for (std::size_t f = 0; f < library.size(); ++f) {
    const TestFunction& phi = library[f];
    const GrazingGapResult gg = grazing_gap(phi, state, eps_sorted, params);

    // Slugged names: some library names carry commas, which CsvTable does
    // not quote.
    const std::string label = slug(phi.name);
    std::vector<double> x, y, zero;
    for (const auto& row : gg.rows) {
      table.add_row({label, format_double(row.eps), format_double(row.gap),
                     format_double(row.landau_ref), format_double(gg.slope),
                     std::to_string(int(gg.conserved))});
      x.push_back(row.eps);
      y.push_back(row.gap);
      zero.push_back(0.0);
    }
    res.plotdata.emplace_back("grazing_" + slug(phi.name) + ".csv", xy_csv(x, y, zero));

    const bool expect_conserved = f < conserved_count;
    if (expect_conserved) {
      push_assert(res, phi.name + "_conserved", gg.conserved,
                  "all gaps at rounding level: " + std::string(gg.conserved ? "yes" : "no"));
    } else {
      const auto& tight = gg.rows.back();  // smallest eps (sorted descending)
      push_assert(res, phi.name + "_slope", gg.slope >= 0.9,
                  "slope " + format_double(gg.slope) + " >= 0.9");
      push_assert(res, phi.name + "_tight_gap",
                  tight.gap <= 0.10 * std::abs(tight.landau_ref),
                  "gap(" + format_double(tight.eps) + ") = " + format_double(tight.gap) +
                      " <= 10% of |G| = " + format_double(std::abs(tight.landau_ref)));
    }
    summary_rows.push_back({{"function", phi.name},
                            {"slope", gg.slope},
                            {"conserved", gg.conserved}});
  }
  res.results_csv = table.str();
  res.summary = {{"functions", summary_rows}};
  return res;
}

// ---------------------------------------------------------------------------
// consistency: O(1/N) generator gap on polynomial functionals

ExperimentResult exp_consistency(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);

  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(cfg.d);
  c1[0] = 0.5;
  const PolynomialFunctional Phi{{gaussian_bump(c1, 1.0), gaussian_bump(-c1, 1.2)}};
  const ConsistencySweep sweep = consistency_sweep(Phi, cfg.n_list, cfg.energy,
                                                   cfg.samples_per_n, substream(cfg.seed, 1),
                                                   params);

  // Conserved control: the same sweep machinery on <|v|^2> must report exact
  // zeros (the functional is invariant under the dynamics).
  const std::vector<int> control_list(cfg.n_list.begin(),
                                      cfg.n_list.begin() + 2);
  const ConsistencySweep control =
      consistency_sweep(PolynomialFunctional{{squared_norm(cfg.d)}}, control_list, cfg.energy,
                        std::min(cfg.samples_per_n, 5), substream(cfg.seed, 2), params);

  CsvTable table("N,gap_median,gap_max,slope_running");
  std::vector<double> x, y, zero;
  for (const auto& row : sweep.rows) {
    table.add_numeric_row({double(row.n), row.gap_median, row.gap_max, row.slope_running});
    x.push_back(double(row.n));
    y.push_back(row.gap_median);
    zero.push_back(0.0);
  }
  res.results_csv = table.str();
  res.plotdata.emplace_back("consistency_gap.csv", xy_csv(x, y, zero));

  push_assert(res, "slope_window", sweep.slope >= -1.2 && sweep.slope <= -0.85,
              "slope " + format_double(sweep.slope) + " in [-1.2, -0.85]");
  push_assert(res, "conserved_control_exact_zero", control.exact_zero,
              std::string("exact_zero = ") + (control.exact_zero ? "true" : "false"));

  res.summary = {{"slope", sweep.slope},
                 {"control_exact_zero", control.exact_zero},
                 {"gap_median_first", sweep.rows.front().gap_median},
                 {"gap_median_last", sweep.rows.back().gap_median}};
  return res;
}

// ---------------------------------------------------------------------------
// chaos-sweep: two-particle observable gap against a large-N surrogate

ExperimentResult exp_chaos_sweep(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);
  const DensitySpec f0 = make_density(cfg, cfg.initial);
  const int workers = resolve_threads(cfg);

  IntegratorConfig ic_base;
  ic_base.dt = cfg.dt;
  ic_base.steps = std::llround(cfg.observable_time / cfg.dt);
  ic_base.enforce_sphere = true;

  // Surrogate reference: one large-N run, its per-particle average standing
  // in for the limit expectation of the observable.
  BoltzmannSphereSpec ref_spec;
  ref_spec.n = cfg.n_ref;
  ref_spec.params = params;
  const ParticleState ref0 =
      sample_conditioned_tensor(f0, ref_spec, substream(cfg.seed, 0xE0));
  IntegratorConfig ic_ref = ic_base;
  ic_ref.seed = substream(cfg.seed, 0xE1);
  const Eigen::MatrixXd ref_cloud = simulate(ref0, ic_ref, params).snapshots.back();

  const Observable phi = squared_norm(cfg.d);
  double ref_mean = 0;
  for (int i = 0; i < ref_cloud.cols(); ++i) ref_mean += phi.value(ref_cloud.col(i));
  ref_mean /= double(ref_cloud.cols());

  const std::vector<Observable> factors = {phi, phi};
  const std::vector<double> reference = {ref_mean, ref_mean};

  CsvTable table("N,gap,std_error");
  std::vector<double> xs, ys, es;
  json seed_map;
  for (int n : cfg.n_list) {
    const std::uint64_t base = substream(cfg.seed, std::uint64_t(n));
    std::vector<Eigen::MatrixXd> ensemble(std::size_t(cfg.realizations));
    parallel_realizations(cfg.realizations, workers, [&](int r) {
      BoltzmannSphereSpec spec;
      spec.n = n;
      spec.params = params;
      const std::uint64_t rs = substream(base, std::uint64_t(r));
      const ParticleState v0 = sample_conditioned_tensor(f0, spec, rs);
      IntegratorConfig ic = ic_base;
      ic.seed = substream(rs, 1);
      ensemble[std::size_t(r)] = simulate(v0, ic, params).snapshots.back();
    });
    const MetricReport rep =
        marginal_observable_gap(ensemble, factors, reference, substream(cfg.seed, 0xE2));
    table.add_numeric_row({double(n), rep.value, rep.std_error});
    xs.push_back(double(n));
    ys.push_back(rep.value);
    es.push_back(rep.std_error);
    seed_map["N=" + std::to_string(n)] = seeds_json(base, cfg.realizations);
  }
  res.results_csv = table.str();
  res.plotdata.emplace_back("chaos_sweep_gap.csv", xy_csv(xs, ys, es));

  bool decreasing = true;
  for (std::size_t k = 1; k < ys.size(); ++k) decreasing = decreasing && ys[k] < ys[k - 1];
  push_assert(res, "gap_strictly_decreasing", decreasing,
              "gaps " + [&] {
                std::string s;
                for (double g : ys) s += format_double(g) + " ";
                return s;
              }());
  push_assert(res, "gap_reduction_factor", ys.back() <= ys.front() / 3.0,
              format_double(ys.back()) + " <= " + format_double(ys.front()) + "/3");

  res.summary = {{"reference_mean", ref_mean},
                 {"gaps", ys},
                 {"std_errors", es},
                 {"realization_seeds", seed_map}};
  return res;
}

// ---------------------------------------------------------------------------
// contraction-w2: synchronous coupling of two ensembles

ExperimentResult exp_contraction_w2(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);
  const DensitySpec fx = make_density(cfg, cfg.initial);
  const DensitySpec fy = make_density(cfg, cfg.initial_y);
  const int workers = resolve_threads(cfg);
  const int m = cfg.checkpoints;
  const int R = cfg.realizations;

  BoltzmannSphereSpec spec;
  spec.n = cfg.n;
  spec.params = params;

  const std::size_t mm = std::size_t(m);
  const std::size_t rr = std::size_t(R);
  std::vector<std::vector<double>> w2(rr, std::vector<double>(mm));
  std::vector<std::vector<double>> w2_se = w2;
  std::vector<double> times(mm);

  parallel_realizations(R, workers, [&](int r) {
    const std::uint64_t rs = substream(cfg.seed, std::uint64_t(r));
    const ParticleState x0 = sample_conditioned_tensor(fx, spec, substream(rs, 1));
    const ParticleState y0 = sample_conditioned_tensor(fy, spec, substream(rs, 2));
    // Identical integrator seed: both ensembles see the same pair-noise
    // stream, yielding the synchronous coupling the contraction argument
    // runs on.
    const std::uint64_t shared = substream(rs, 3);
    const CheckpointedRun rx = run_landau_checkpointed(x0, cfg, params, shared);
    const CheckpointedRun ry = run_landau_checkpointed(y0, cfg, params, shared);
    for (int k = 0; k < m; ++k) {
      const ValueSe v = w2_with_se(rx.clouds[std::size_t(k)], ry.clouds[std::size_t(k)]);
      w2[std::size_t(r)][std::size_t(k)] = v.value;
      w2_se[std::size_t(r)][std::size_t(k)] = v.se;
    }
    if (r == 0) times = rx.times;
  });

  // One realization: delta-method errors; several: across-realization errors.
  std::vector<double> value(mm), se(mm);
  for (int k = 0; k < m; ++k) {
    std::vector<double> across;
    for (int r = 0; r < R; ++r) across.push_back(w2[std::size_t(r)][std::size_t(k)]);
    value[std::size_t(k)] = mean_of(across);
    se[std::size_t(k)] = R >= 2 ? sample_sd(across) / std::sqrt(double(R))
                                : w2_se[0][std::size_t(k)];
  }

  CsvTable table("t,w2,std_error");
  for (int k = 0; k < m; ++k)
    table.add_numeric_row({times[std::size_t(k)], value[std::size_t(k)], se[std::size_t(k)]});
  res.results_csv = table.str();
  res.plotdata.emplace_back("contraction_w2.csv", xy_csv(times, value, se));

  bool bounded = true;
  std::string worst;
  for (int k = 1; k < m; ++k) {
    const double bound = value[0] + 3 * (se[0] + se[std::size_t(k)]);
    if (value[std::size_t(k)] > bound) {
      bounded = false;
      worst = "t=" + format_double(times[std::size_t(k)]) + ": " +
              format_double(value[std::size_t(k)]) + " > " + format_double(bound);
    }
  }
  push_assert(res, "w2_never_exceeds_initial", bounded,
              bounded ? "sup_t W2(t) <= W2(0) + 3 sigma" : worst);

  std::vector<double> logw;
  for (double v : value) logw.push_back(std::log(v));
  const LinearFit fit = linear_fit(times, logw);
  const bool trend_ok = fit.slope <= 3 * fit.slope_std_error;
  push_assert(res, "log_trend_non_increasing", trend_ok,
              "slope " + format_double(fit.slope) + " <= 3 x " +
                  format_double(fit.slope_std_error));

  res.summary = {{"w2_initial", value.front()},
                 {"w2_final", value.back()},
                 {"log_slope", fit.slope},
                 {"log_slope_std_error", fit.slope_std_error},
                 {"realization_seeds", seeds_json(cfg.seed, R)}};
  return res;
}

// ---------------------------------------------------------------------------
// contraction-fourier: characteristic-function distance along two flows

ExperimentResult exp_contraction_fourier(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);
  const DensitySpec fx = make_density(cfg, cfg.initial);
  const DensitySpec fy = make_density(cfg, cfg.initial_y);

  BoltzmannSphereSpec spec;
  spec.n = cfg.n;
  spec.params = params;
  const ParticleState x0 = sample_conditioned_tensor(fx, spec, substream(cfg.seed, 1));
  const ParticleState y0 = sample_conditioned_tensor(fy, spec, substream(cfg.seed, 2));
  const CheckpointedRun rx = run_landau_checkpointed(x0, cfg, params, substream(cfg.seed, 3));
  const CheckpointedRun ry = run_landau_checkpointed(y0, cfg, params, substream(cfg.seed, 4));

  MetricConfig mc;
  mc.s = cfg.s;
  mc.xi_count = cfg.xi_count;
  mc.bootstrap = cfg.bootstrap;
  mc.seed = substream(cfg.seed, 5);

  const int m = cfg.checkpoints;
  const std::size_t mm = std::size_t(m);
  std::vector<double> value(mm), se(mm);
  CsvTable table("t,value,std_error,params");
  for (int k = 0; k < m; ++k) {
    const MetricReport rep =
        fourier_distance(rx.clouds[std::size_t(k)], ry.clouds[std::size_t(k)], cfg.s, mc);
    value[std::size_t(k)] = rep.value;
    se[std::size_t(k)] = rep.std_error;
    table.add_row({format_double(rx.times[std::size_t(k)]), format_double(rep.value),
                   format_double(rep.std_error), rep.params});
  }
  res.results_csv = table.str();
  res.plotdata.emplace_back("contraction_fourier.csv", xy_csv(rx.times, value, se));

  bool bounded = true;
  std::string worst;
  for (int k = 1; k < m; ++k) {
    const double bound = value[0] + 3 * (se[0] + se[std::size_t(k)]);
    if (value[std::size_t(k)] > bound) {
      bounded = false;
      worst = "t=" + format_double(rx.times[std::size_t(k)]) + ": " +
              format_double(value[std::size_t(k)]) + " > " + format_double(bound);
    }
  }
  push_assert(res, "fourier_distance_never_exceeds_initial", bounded,
              bounded ? "sup_t |f-g|_s(t) <= |f-g|_s(0) + 3 sigma" : worst);

  res.summary = {{"value_initial", value.front()}, {"value_final", value.back()}};
  return res;
}

// ---------------------------------------------------------------------------
// equilibrate: distance and divergence to the Gaussian equilibrium

ExperimentResult exp_equilibrate(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);
  const DensitySpec f0 = make_density(cfg, cfg.initial);

  BoltzmannSphereSpec spec;
  spec.n = cfg.n;
  spec.params = params;
  const ParticleState x0 = sample_conditioned_tensor(f0, spec, substream(cfg.seed, 1));
  const CheckpointedRun run = run_landau_checkpointed(x0, cfg, params, substream(cfg.seed, 2));

  const GaussianState gamma = equilibrium_gaussian(params);
  // One fixed equilibrium cloud: checkpoint-to-checkpoint W2 differences then
  // reflect the evolving marginal only.
  Eigen::MatrixXd gamma_cloud(cfg.d, cfg.n);
  {
    SequentialRng rng(substream(cfg.seed, 3), stream::kReference);
    const double sd = std::sqrt(cfg.energy / cfg.d);
    for (int i = 0; i < cfg.n; ++i)
      for (int a = 0; a < cfg.d; ++a) gamma_cloud(a, i) = sd * rng.normal();
  }

  MetricConfig mc;
  mc.k_nn = cfg.k_nn;
  mc.entropy_subsamples = cfg.entropy_subsamples;
  mc.seed = substream(cfg.seed, 4);

  const int m = cfg.checkpoints;
  const std::size_t mm = std::size_t(m);
  std::vector<double> w2(mm), w2e(mm), rel(mm), rele(mm), ent(mm), ente(mm);
  CsvTable table(
      "t,w2,w2_std_error,relative_entropy,relative_entropy_std_error,entropy,"
      "entropy_std_error");
  for (int k = 0; k < m; ++k) {
    const Eigen::MatrixXd& cloud = run.clouds[std::size_t(k)];
    const ValueSe w = w2_with_se(cloud, gamma_cloud);
    const MetricReport re = relative_entropy_vs_gaussian(cloud, gamma, mc);
    const ValueSe h = knn_with_se(cloud, cfg, substream(cfg.seed, 5),
                                  substream(substream(cfg.seed, 6), std::uint64_t(k)));
    w2[std::size_t(k)] = w.value;
    w2e[std::size_t(k)] = w.se;
    rel[std::size_t(k)] = re.value;
    rele[std::size_t(k)] = re.std_error;
    ent[std::size_t(k)] = h.value;
    ente[std::size_t(k)] = h.se;
    table.add_numeric_row({run.times[std::size_t(k)], w.value, w.se, re.value, re.std_error,
                           h.value, h.se});
  }
  res.results_csv = table.str();
  res.plotdata.emplace_back("equilibrate_w2.csv", xy_csv(run.times, w2, w2e));
  res.plotdata.emplace_back("equilibrate_relative_entropy.csv", xy_csv(run.times, rel, rele));
  res.plotdata.emplace_back("equilibrate_entropy.csv", xy_csv(run.times, ent, ente));

  std::vector<double> logw;
  for (double v : w2) logw.push_back(std::log(v));
  const LinearFit fit = linear_fit(run.times, logw);
  const double p = p_value_slope_negative(fit);
  push_assert(res, "w2_decay_significant", fit.slope < 0 && p < 0.01,
              "slope " + format_double(fit.slope) + ", one-sided p " + format_double(p));

  push_assert(res, "relative_entropy_small_at_end", rel.back() <= 0.05,
              format_double(rel.back()) + " <= 0.05");

  bool monotone = true;
  std::string worst;
  for (int k = 1; k < m; ++k) {
    const double allowed = ent[std::size_t(k - 1)] +
                           2 * (ente[std::size_t(k - 1)] + ente[std::size_t(k)]);
    if (ent[std::size_t(k)] > allowed) {
      monotone = false;
      worst = "t=" + format_double(run.times[std::size_t(k)]) + ": " +
              format_double(ent[std::size_t(k)]) + " > " + format_double(allowed);
    }
  }
  push_assert(res, "entropy_non_increasing", monotone,
              monotone ? "checkpoint increments within 2 sigma" : worst);

  res.summary = {{"w2_initial", w2.front()},
                 {"w2_final", w2.back()},
                 {"w2_log_slope", fit.slope},
                 {"w2_p_value", p},
                 {"relative_entropy_final", rel.back()},
                 {"entropy_initial", ent.front()},
                 {"entropy_final", ent.back()}};
  return res;
}

// ---------------------------------------------------------------------------
// entropy: H-theorem trace with the Gaussian-family closed form alongside

ExperimentResult exp_entropy(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const ModelParams params = make_params(cfg);
  const DensitySpec f0 = make_density(cfg, cfg.initial);

  BoltzmannSphereSpec spec;
  spec.n = cfg.n;
  spec.params = params;
  const ParticleState x0 = sample_conditioned_tensor(f0, spec, substream(cfg.seed, 1));
  const CheckpointedRun run = run_landau_checkpointed(x0, cfg, params, substream(cfg.seed, 2));

  const GaussianState gamma = equilibrium_gaussian(params);
  const MomentState m0 =
      MomentState::from_pressure(Eigen::VectorXd::Zero(cfg.d), f0.covariance());

  const int m = cfg.checkpoints;
  const std::size_t mm = std::size_t(m);
  std::vector<double> ent(mm), ente(mm), ref(mm), zero(mm, 0.0);
  CsvTable table("t,entropy,entropy_std_error,gaussian_kl_reference");
  for (int k = 0; k < m; ++k) {
    const ValueSe h = knn_with_se(run.clouds[std::size_t(k)], cfg, substream(cfg.seed, 3),
                                  substream(substream(cfg.seed, 4), std::uint64_t(k)));
    const MomentState mt = evolve_pressure(m0, run.times[std::size_t(k)], params);
    const GaussianState gt{Eigen::VectorXd::Zero(cfg.d), mt.pressure};
    ent[std::size_t(k)] = h.value;
    ente[std::size_t(k)] = h.se;
    ref[std::size_t(k)] = gaussian_relative_entropy(gt, gamma);
    table.add_numeric_row(
        {run.times[std::size_t(k)], h.value, h.se, ref[std::size_t(k)]});
  }
  res.results_csv = table.str();
  res.plotdata.emplace_back("entropy_knn.csv", xy_csv(run.times, ent, ente));
  res.plotdata.emplace_back("entropy_gaussian_reference.csv", xy_csv(run.times, ref, zero));

  bool monotone = true;
  std::string worst;
  for (int k = 1; k < m; ++k) {
    const double allowed = ent[std::size_t(k - 1)] +
                           2 * (ente[std::size_t(k - 1)] + ente[std::size_t(k)]);
    if (ent[std::size_t(k)] > allowed) {
      monotone = false;
      worst = "t=" + format_double(run.times[std::size_t(k)]) + ": " +
              format_double(ent[std::size_t(k)]) + " > " + format_double(allowed);
    }
  }
  push_assert(res, "entropy_non_increasing", monotone,
              monotone ? "checkpoint increments within 2 sigma" : worst);

  bool ref_decreasing = true;
  for (int k = 1; k < m; ++k)
    ref_decreasing = ref_decreasing && ref[std::size_t(k)] < ref[std::size_t(k - 1)];
  push_assert(res, "gaussian_reference_strictly_decreasing", ref_decreasing,
              "closed-form KL along the moment flow");

  res.summary = {{"entropy_initial", ent.front()},
                 {"entropy_final", ent.back()},
                 {"reference_initial", ref.front()},
                 {"reference_final", ref.back()}};
  return res;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto diags = cfg.validate();
  if (!diags.empty()) throw std::invalid_argument("run_experiment: " + diags.front());
  if (cfg.experiment == "conserve") return exp_conserve(cfg);
  if (cfg.experiment == "grazing") return exp_grazing(cfg);
  if (cfg.experiment == "consistency") return exp_consistency(cfg);
  if (cfg.experiment == "chaos-sweep") return exp_chaos_sweep(cfg);
  if (cfg.experiment == "contraction-w2") return exp_contraction_w2(cfg);
  if (cfg.experiment == "contraction-fourier") return exp_contraction_fourier(cfg);
  if (cfg.experiment == "equilibrate") return exp_equilibrate(cfg);
  if (cfg.experiment == "entropy") return exp_entropy(cfg);
  throw std::invalid_argument("run_experiment: unknown experiment '" + cfg.experiment + "'");
}

std::vector<std::string> write_artifacts(const ExperimentConfig& cfg,
                                         const ExperimentResult& result,
                                         double wall_clock_seconds) {
  namespace fs = std::filesystem;
  const fs::path root(cfg.output_dir);
  fs::create_directories(root / "plotdata");

  std::vector<std::string> files;
  write_text_file((root / "results.csv").string(), result.results_csv);
  files.push_back("results.csv");
  for (const auto& [name, csv] : result.plotdata) {
    write_text_file((root / "plotdata" / name).string(), csv);
    files.push_back("plotdata/" + name);
  }

  json manifest;
  manifest["experiment"] = cfg.experiment;
  manifest["code_version"] = "0.1.0";
  manifest["wall_clock_seconds"] = wall_clock_seconds;
  manifest["config"] = cfg.to_json();
  manifest["summary"] = result.summary;
  json asserts = json::array();
  for (const auto& a : result.assertions)
    asserts.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  manifest["assertions"] = asserts;
  json outs = json::array();
  for (const auto& f : files) outs.push_back(f);
  outs.push_back("manifest.json");
  manifest["outputs"] = outs;

  write_text_file((root / "manifest.json").string(), manifest.dump(2) + "\n");
  files.push_back("manifest.json");
  return files;
}

}  // namespace landau
