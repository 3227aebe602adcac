// N-particle interacting diffusion and its generator.
//
// Dynamics (Euler-Maruyama step): for each unordered pair i<k an independent
// increment dZ ~ Normal(0, dt I_d) drives particle i by (sqrt2/sqrtN)
// sigma(v_i - v_k) dZ and particle k by the exact negation (sigma is even in
// z, so the pair exchange is antisymmetric and total momentum change is 0);
// each particle also drifts by (2 dt/N) sum_{k != i} b(v_i - v_k).
//
// Generator on C^2 test functions:
//   G phi = (1/N) sum_{i,j} b(v_i-v_j).(grad_i - grad_j) phi
//         + (1/2N) sum_{i,j} a(v_i-v_j):(H_ii + H_jj - H_ij - H_ji) phi,
// with vanishing i=j terms.
//
// Pair noise is generated on the fly from a counter-based stream keyed by
// (seed, step, i, k); accumulation uses a fixed partition of the pair
// triangle into chunks summed in chunk order, so results are bitwise
// reproducible for any thread count.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "landau/model.hpp"
#include "landau/rng.hpp"
#include "landau/sphere.hpp"
#include "landau/test_functions.hpp"

namespace landau {

struct IntegratorConfig {
  double dt = 1e-3;
  std::int64_t steps = 0;        // number of em steps (t_end = steps * dt)
  bool enforce_sphere = true;    // project to the initial (E, M) manifold per step
  std::int64_t record_stride = 0;  // snapshot every this many steps; 0 = endpoints only
  std::uint64_t seed = 0;
  std::uint64_t noise_stream = stream::kPairNoise;

  void validate() const;
};

struct TrajectoryRecord {
  std::vector<double> snapshot_times;
  std::vector<Eigen::MatrixXd> snapshots;
  // Per-step conserved-quantity log: column k = (t, momentum mean, energy).
  std::vector<double> times;
  Eigen::MatrixXd momentum_log;  // d x (steps+1), mean velocity
  std::vector<double> energy_log;  // mean squared speed about the mean
};

// Exact generator value (double pair sum) for a C^2 test function.
double generator_landau(const TestFunction& phi, const ParticleState& state,
                        const ModelParams& params);

// One Euler-Maruyama step in place.  The PairNoise callable fills d standard
// normals for unordered pair (i, k), i < k; the default draws them from
// stream (seed, noise_stream) at counter (step, pair index).
template <class PairNoiseFn>
void em_step_with_noise(Eigen::MatrixXd& V, double dt, const ModelParams& params,
                        PairNoiseFn&& noise);

void em_step(Eigen::MatrixXd& V, double dt, const ModelParams& params, const RngStream& rs,
             std::uint64_t step_index);

// Iterates em_step from v0; if enforce_sphere, projects each step back to the
// manifold of v0's measured (E, M).  Logs conserved quantities every step.
// Throws on velocity blow-up (any |v_i| > 1e100, signaling dt too large).
TrajectoryRecord simulate(const ParticleState& v0, const IntegratorConfig& cfg,
                          const ModelParams& params);

struct WeakGeneratorCheck {
  double estimate = 0;    // Monte Carlo (E[phi(step(V))] - phi(V)) / dt
  double std_error = 0;
  double generator = 0;   // exact generator value at V
};

// One-step expectation-drift check of the integrator against the generator.
WeakGeneratorCheck weak_generator_check(const TestFunction& phi, const ParticleState& state,
                                        double dt, int n_samples, const ModelParams& params,
                                        std::uint64_t seed);

// --- implementation of the templated kernel -------------------------------

namespace detail {
// Fixed chunking of the row range [0, N): chunk boundaries depend only on N,
// never on the thread count, so per-chunk accumulators can be reduced in
// chunk order for bitwise-reproducible parallel results.
inline std::vector<int> chunk_bounds(int n, int chunks) {
  std::vector<int> b;
  b.reserve(chunks + 1);
  for (int c = 0; c <= chunks; ++c) b.push_back(int(std::int64_t(n) * c / chunks));
  return b;
}
constexpr int kPairChunks = 64;
}  // namespace detail

template <class PairNoiseFn>
void em_step_with_noise(Eigen::MatrixXd& V, double dt, const ModelParams& params,
                        PairNoiseFn&& noise) {
  const int d = int(V.rows());
  const int n = int(V.cols());
  const double lam = params.lambda;
  const double sqrt_lam = std::sqrt(lam);
  // noise(i,k,.) yields standard normals; the step increment needs
  // (sqrt2/sqrtN) sigma(z) dZ with dZ ~ Normal(0, dt I).
  const double noise_scale = std::sqrt(2.0 * dt / n);
  const double drift_scale = 2.0 * dt / n * (-lam * (d - 1));

  const int chunks = std::min(detail::kPairChunks, n);
  const auto bounds = detail::chunk_bounds(n, chunks);
  std::vector<Eigen::MatrixXd> acc(chunks);

#pragma omp parallel for schedule(dynamic, 1)
  for (int c = 0; c < chunks; ++c) {
    Eigen::MatrixXd& inc = acc[c];
    inc = Eigen::MatrixXd::Zero(d, n);
    Eigen::VectorXd z(d), dz(d), w(d);
    for (int i = bounds[c]; i < bounds[c + 1]; ++i) {
      for (int k = i + 1; k < n; ++k) {
        z = V.col(i) - V.col(k);
        const double z2 = z.squaredNorm();
        // drift: b(z) on i, b(-z) = -b(z) on k
        inc.col(i) += drift_scale * z;
        inc.col(k) -= drift_scale * z;
        if (z2 == 0.0) continue;  // coincident pair: sigma(0) = 0
        noise(i, k, dz);
        // sigma(z) dz = sqrt(lam) (|z| dz - z (z.dz)/|z|)
        const double r = std::sqrt(z2);
        const double proj = z.dot(dz) / r;
        w = (sqrt_lam * noise_scale) * (r * dz - proj * z);
        inc.col(i) += w;
        inc.col(k) -= w;
      }
    }
  }
  for (int c = 0; c < chunks; ++c) V += acc[c];
}

}  // namespace landau
