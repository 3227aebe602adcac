// Binary-collision jump process with a grazing kernel family, its generator
// by quadrature, and the gap to the diffusion generator.  Fixed d = 3 (the
// collision frame uses cross products).
//
// Collision rule: v_i' = (v_i+v_j)/2 + (|v_i-v_j|/2) sigma,
//                 v_j' = (v_i+v_j)/2 - (|v_i-v_j|/2) sigma,
// with sigma = cos(theta) zhat + sin(theta)(cos(phi) h + sin(phi) e),
// {zhat, h, e} an orthonormal frame around zhat = (v_i-v_j)/|v_i-v_j|.
//
// Default kernel family: zeta_eps(theta) = (24 lambda / (pi eps^3)) on
// (0, eps]; its momentum-transfer integral
// (pi/2) Int sin^2(theta/2) zeta_eps = lambda + O(eps^2), and its total
// angular mass is 2 pi Int zeta_eps = 48 lambda / eps^2.  Each unordered pair
// carries jump rate (total mass)/N.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "landau/model.hpp"
#include "landau/rng.hpp"
#include "landau/test_functions.hpp"

namespace landau {

struct GrazingKernel {
  double eps = 0.1;          // concentration parameter, in (0, pi/2]
  double lambda_target = 1;  // limiting collision strength
  std::function<double(double)> density;      // zeta_eps(theta) on (0, pi/2]
  std::function<double(double)> inverse_cdf;  // u in (0,1) -> theta
  double theta_max = 0.1;    // support upper end (quadrature window)
  double total_mass = 0;     // 2 pi Int_0^{pi/2} zeta_eps(theta) dtheta

  // zeta_eps(theta) = (24 lambda/(pi eps^3)) 1{0 < theta <= eps}
  static GrazingKernel uniform_family(double eps, double lambda);
};

// (pi/2) Int_0^{pi/2} sin^2(theta/2) zeta(theta) dtheta by Gauss-Legendre
// quadrature on the kernel support.
double lambda_eps(const GrazingKernel& kernel, int quad_nodes = 256);

// Elastic binary collision toward unit vector sigma.
std::pair<Eigen::Vector3d, Eigen::Vector3d> collide(const Eigen::Vector3d& vi,
                                                    const Eigen::Vector3d& vj,
                                                    const Eigen::Vector3d& sigma);

struct CollisionEvent {
  double time = 0;
  int i = 0, j = 0;
  double theta = 0, phi = 0;
  Eigen::Vector3d sigma = Eigen::Vector3d::Zero();
};

// Draws (theta, phi) from the kernel, builds sigma in the pair frame, and
// collides.  Requires v_i != v_j (callers resample coincident pairs).
std::pair<Eigen::Vector3d, Eigen::Vector3d> sample_post_collision(const Eigen::Vector3d& vi,
                                                                  const Eigen::Vector3d& vj,
                                                                  const GrazingKernel& kernel,
                                                                  SequentialRng& rng,
                                                                  CollisionEvent* event);

struct KacRecord {
  std::vector<double> snapshot_times;
  std::vector<Eigen::MatrixXd> snapshots;
  std::vector<CollisionEvent> events;
  std::int64_t event_count = 0;
  double t_end = 0;
  Eigen::MatrixXd final_state;
  // Worst drift of the global invariants over the whole run (vs the
  // initial state), maintained after every event when tracking is on.
  double max_energy_drift = 0;
  double max_momentum_drift = 0;
};

struct KacOptions {
  // Snapshot checkpoints (absolute times); the final state is always stored.
  std::vector<double> checkpoints;
  bool log_events = true;
  bool track_conservation = true;
  std::int64_t max_events = -1;  // stop after this many events (<0 = unlimited)
};

// Stochastic simulation: exponential waiting times at global rate
// (N-1)/2 * total_mass, uniformly random pair per event.  Refuses
// configurations whose expected event count exceeds 1e9.
KacRecord simulate_kac(const ParticleState& v0, double t_end, const GrazingKernel& kernel,
                       std::uint64_t seed, const KacOptions& opts = {});

// (1/2N) sum_{i != j} Int dtheta Int dphi zeta(theta) (phi(V'_ij) - phi(V))
// by tensor-product quadrature: Gauss-Legendre in theta on the kernel
// support, uniform trapezoid in phi.
double generator_boltzmann(const TestFunction& phi, const ParticleState& state,
                           const GrazingKernel& kernel, int n_theta = 64, int n_phi = 64);

struct GrazingGapRow {
  double eps = 0;
  double gap = 0;        // |G_eps phi - G phi|
  double landau_ref = 0; // |G phi| (diffusion generator magnitude)
};

struct GrazingGapResult {
  std::vector<GrazingGapRow> rows;
  double slope = 0;       // least-squares slope of log(gap) vs log(eps)
  bool conserved = false; // all gaps below rounding: slope meaningless
};

GrazingGapResult grazing_gap(const TestFunction& phi, const ParticleState& state,
                             const std::vector<double>& eps_list, const ModelParams& params,
                             int n_theta = 64, int n_phi = 64);

}  // namespace landau
