// Model parameters, particle states, empirical measures, and the quadratic
// Maxwellian-molecule coefficient field shared by every other component:
//
//   a(z)     = lambda (|z|^2 I - z z^T)        symmetric PSD, a(z) z = 0
//   b(z)     = -lambda (d-1) z                 row divergence of a
//   c        = -lambda d (d-1)                 double divergence of a
//   sigma(z) = sqrt(lambda) |z| (I - zz^T/|z|^2), symmetric, sigma sigma^T = a
//
// sigma is the closed-form symmetric PSD square root of a (the projector
// I - zz^T/|z|^2 is idempotent), so no numeric factorization is needed.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

struct ModelParams {
  int d = 3;                 // spatial dimension, >= 2
  double lambda = 1.0;       // collision strength, > 0
  double energy = 3.0;       // per-particle energy E about the mean momentum
  Eigen::VectorXd momentum;  // per-particle mean momentum M (empty => zero)

  Eigen::VectorXd momentum_or_zero() const {
    return momentum.size() == d ? momentum : Eigen::VectorXd::Zero(d);
  }
  void validate() const {
    if (d < 2) throw std::invalid_argument("ModelParams: d must be >= 2");
    if (!(lambda > 0)) throw std::invalid_argument("ModelParams: lambda must be > 0");
    if (energy < 0) throw std::invalid_argument("ModelParams: energy must be >= 0");
    if (momentum.size() != 0 && momentum.size() != d)
      throw std::invalid_argument("ModelParams: momentum dimension mismatch");
  }
};

// Velocity configuration: column i of `v` is particle i (d x N storage, each
// particle contiguous), plus the simulation clock.
struct ParticleState {
  Eigen::MatrixXd v;  // d x N
  double time = 0.0;

  int dim() const { return int(v.rows()); }
  int n() const { return int(v.cols()); }
};

struct EmpiricalMeasure {
  Eigen::MatrixXd atoms;    // d x n
  Eigen::VectorXd weights;  // nonnegative, sums to 1

  int n() const { return int(atoms.cols()); }
};

// Scalar one-particle weight m(v); weight_MN averages it over a configuration.
using WeightFunction = std::function<double(const Eigen::VectorXd&)>;

// <v>^k = (1 + |v|^2)^{k/2} for even k.
inline WeightFunction bracket_weight(int k) {
  return [k](const Eigen::VectorXd& v) { return std::pow(1.0 + v.squaredNorm(), k / 2.0); };
}
inline WeightFunction norm_power_weight(int k) {
  return [k](const Eigen::VectorXd& v) { return std::pow(v.norm(), double(k)); };
}

Eigen::MatrixXd coeff_a(const Eigen::VectorXd& z, const ModelParams& p);
Eigen::VectorXd coeff_b(const Eigen::VectorXd& z, const ModelParams& p);
double coeff_c(const ModelParams& p);
Eigen::MatrixXd coeff_sigma(const Eigen::VectorXd& z, const ModelParams& p);

// Uniform-weight empirical measure of a configuration.
EmpiricalMeasure empirical(const ParticleState& state);

// (1/N) sum_i m(v_i).
double weight_MN(const ParticleState& state, const WeightFunction& m);

// Mean velocity and mean centered energy (1/N) sum |v_i - mean|^2.
Eigen::VectorXd mean_velocity(const Eigen::MatrixXd& v);
double centered_energy(const Eigen::MatrixXd& v, const Eigen::VectorXd& center);

}  // namespace landau
