#include "landau/landau_sde.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

namespace landau {

void IntegratorConfig::validate() const {
  if (!(dt > 0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
  if (steps < 0) throw std::invalid_argument("IntegratorConfig: steps must be >= 0");
  if (record_stride < 0)
    throw std::invalid_argument("IntegratorConfig: record_stride must be >= 0");
}

double generator_landau(const TestFunction& phi, const ParticleState& state,
                        const ModelParams& params) {
  const Eigen::MatrixXd& V = state.v;
  const int n = int(V.cols());
  double acc = 0.0;
  // Ordered double sum folded onto unordered pairs: the (i,j) and (j,i)
  // terms are equal (a even, b odd, Hessian combination symmetric).
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd gi = phi.grad(V, i);
    for (int j = i + 1; j < n; ++j) {
      const Eigen::VectorXd z = V.col(i) - V.col(j);
      if (z.squaredNorm() == 0.0) continue;
      const Eigen::VectorXd bz = coeff_b(z, params);
      const Eigen::MatrixXd az = coeff_a(z, params);
      const Eigen::VectorXd gj = phi.grad(V, j);
      const Eigen::MatrixXd hc = phi.hess(V, i, i) + phi.hess(V, j, j) -
                                 phi.hess(V, i, j) - phi.hess(V, j, i);
      acc += 2.0 * bz.dot(gi - gj) + az.cwiseProduct(hc).sum();
    }
  }
  return acc / n;
}

void em_step(Eigen::MatrixXd& V, double dt, const ModelParams& params, const RngStream& rs,
             std::uint64_t step_index) {
  const std::uint64_t n = std::uint64_t(V.cols());
  em_step_with_noise(V, dt, params,
                     [&rs, step_index, n](int i, int k, Eigen::VectorXd& out) {
                       rs.fill_normals(step_index, std::uint64_t(i) * n + std::uint64_t(k),
                                       std::span<double>(out.data(), out.size()));
                     });
}

TrajectoryRecord simulate(const ParticleState& v0, const IntegratorConfig& cfg,
                          const ModelParams& params) {
  cfg.validate();
  // lambda = 0 is allowed here (free streaming: every coefficient vanishes),
  // so validate the fields individually instead of via params.validate().
  if (params.d < 2 || params.d != int(v0.v.rows()))
    throw std::invalid_argument("simulate: dimension mismatch");
  if (!(params.lambda >= 0)) throw std::invalid_argument("simulate: lambda must be >= 0");
  const int d = v0.dim();
  const int n = v0.n();
  if (!v0.v.allFinite()) throw std::invalid_argument("simulate: non-finite initial state");

  // Conservation target measured from the initial data.
  BoltzmannSphereSpec sphere;
  sphere.n = n;
  sphere.params = params;
  sphere.params.momentum = mean_velocity(v0.v);
  sphere.params.energy = centered_energy(v0.v, sphere.params.momentum);
  const bool project = cfg.enforce_sphere && sphere.params.energy > 0;

  RngStream rs(cfg.seed, cfg.noise_stream);

  TrajectoryRecord rec;
  rec.times.reserve(std::size_t(cfg.steps) + 1);
  rec.energy_log.reserve(std::size_t(cfg.steps) + 1);
  rec.momentum_log.resize(d, cfg.steps + 1);

  Eigen::MatrixXd V = v0.v;
  double t = v0.time;
  auto log_state = [&](std::int64_t k) {
    rec.times.push_back(t);
    const Eigen::VectorXd m = mean_velocity(V);
    rec.momentum_log.col(k) = m;
    rec.energy_log.push_back(centered_energy(V, m));
  };
  auto snapshot = [&]() {
    rec.snapshot_times.push_back(t);
    rec.snapshots.push_back(V);
  };

  log_state(0);
  snapshot();
  for (std::int64_t s = 0; s < cfg.steps; ++s) {
    em_step(V, cfg.dt, params, rs, std::uint64_t(s));
    if (project) {
      ParticleState tmp{V, t};
      V = project_to_sphere(tmp, sphere).v;
    }
    t = v0.time + (s + 1) * cfg.dt;
    if (V.cwiseAbs().maxCoeff() > 1e100)
      throw std::runtime_error("simulate: velocity blow-up (|v| > 1e100); reduce dt");
    log_state(s + 1);
    if (cfg.record_stride > 0 && (s + 1) % cfg.record_stride == 0 && s + 1 < cfg.steps)
      snapshot();
  }
  if (cfg.steps > 0) snapshot();
  return rec;
}

WeakGeneratorCheck weak_generator_check(const TestFunction& phi, const ParticleState& state,
                                        double dt, int n_samples, const ModelParams& params,
                                        std::uint64_t seed) {
  WeakGeneratorCheck out;
  out.generator = generator_landau(phi, state, params);
  RngStream rs(seed, stream::kPairNoise);
  const double phi0 = phi.value(state.v);
  double sum = 0, sum2 = 0;
  Eigen::MatrixXd V;
  for (int s = 0; s < n_samples; ++s) {
    V = state.v;
    em_step(V, dt, params, rs, std::uint64_t(s));
    const double inc = (phi.value(V) - phi0) / dt;
    sum += inc;
    sum2 += inc * inc;
  }
  out.estimate = sum / n_samples;
  const double var = std::max(0.0, sum2 / n_samples - out.estimate * out.estimate);
  out.std_error = std::sqrt(var / n_samples);
  return out;
}

}  // namespace landau
