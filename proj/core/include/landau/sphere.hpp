// Constraint manifolds and initial-data samplers.
//
// The particle dynamics preserves mean momentum M and mean centered energy E;
// the corresponding manifold is the "sphere" {(1/N) sum v_i = M,
// (1/N) sum |v_i - M|^2 = E}.  project_to_sphere enforces the constraints by
// shift-then-scale; sample_uniform_sphere projects i.i.d. Gaussians (exactly
// the uniform measure on the manifold); sample_conditioned_tensor projects
// i.i.d. draws from a target density (standard surrogate for conditioning a
// tensor product onto the manifold).

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "landau/model.hpp"
#include "landau/rng.hpp"

namespace landau {

struct BoltzmannSphereSpec {
  int n = 0;  // particle count N >= 2
  ModelParams params;

  void validate() const;
};

struct GaussianComponent {
  double weight = 1.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// A sampleable density with analytic moment metadata.  Gaussians and Gaussian
// mixtures are built in; `custom_sampler`/`custom_log_density`, when set,
// override the mixture machinery (moment metadata must then be supplied).
struct DensitySpec {
  std::vector<GaussianComponent> components;
  std::function<Eigen::VectorXd(SequentialRng&)> custom_sampler;
  std::function<double(const Eigen::VectorXd&)> custom_log_density;
  std::optional<Eigen::VectorXd> custom_mean;
  std::optional<Eigen::MatrixXd> custom_cov;

  static DensitySpec gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);
  static DensitySpec mixture(const std::vector<GaussianComponent>& comps);
  // Equal-weight pair of isotropic Gaussians at +/- center, component
  // variance var per axis.
  static DensitySpec symmetric_bimodal(const Eigen::VectorXd& center, double var);

  int dim() const;
  Eigen::VectorXd mean() const;
  Eigen::MatrixXd covariance() const;       // about the global mean
  double energy() const;                    // E|X|^2 - |EX|^2 = trace(covariance)
  double sixth_moment_bound() const;        // finite upper bound on E|X|^6
  Eigen::VectorXd sample(SequentialRng& rng) const;
  double log_density(const Eigen::VectorXd& v) const;
};

// Shift-then-scale enforcement of the (E, M) constraints:
//   out_i = M + sqrt(E / Ec) (v_i - mean(V)),  Ec = (1/N) sum |v_i - mean|^2.
// Throws when the centered energy is degenerate (all particles equal).
ParticleState project_to_sphere(const ParticleState& state, const BoltzmannSphereSpec& spec);

// Uniform measure on the constraint manifold: dN i.i.d. standard normals,
// then projection.  Both constraints hold exactly (to rounding).
ParticleState sample_uniform_sphere(const BoltzmannSphereSpec& spec, std::uint64_t seed,
                                    std::uint64_t stream_id = stream::kInitialData);

// N i.i.d. draws from f0 followed by projection.  Requires f0 to have zero
// mean and energy E (validated against the metadata to 1e-9) so that the
// projection is an O(1/sqrt(N)) perturbation per atom.
ParticleState sample_conditioned_tensor(const DensitySpec& f0, const BoltzmannSphereSpec& spec,
                                        std::uint64_t seed,
                                        std::uint64_t stream_id = stream::kInitialData);

// Same, but also returns the unprojected i.i.d. cloud (for displacement
// diagnostics in tests).
ParticleState sample_conditioned_tensor(const DensitySpec& f0, const BoltzmannSphereSpec& spec,
                                        std::uint64_t seed, std::uint64_t stream_id,
                                        Eigen::MatrixXd* iid_out);

}  // namespace landau
