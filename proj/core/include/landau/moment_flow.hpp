// Reference dynamics for the mean-field limit without a PDE solver:
//
//   - exact weak-form collision brackets on discrete (atomic) measures,
//   - the closed second-moment flow  dP/dt = 4 lambda (E I - d P)  and its
//     solution  P(t) = (E/d) I + (P0 - (E/d) I) exp(-4 lambda d t),
//   - the Gaussian equilibrium with covariance (E/d) I,
//   - closed-form entropies on the Gaussian family.
//
// The quadratic coefficient field closes the second-moment equations, so
// these references are exact, not discretizations.  Zero-mean convention:
// callers translate nonzero-momentum inputs.

#pragma once

#include <Eigen/Dense>

#include "landau/model.hpp"
#include "landau/observables.hpp"

namespace landau {

struct MomentState {
  Eigen::VectorXd mean;      // velocity mean, zero in all flow operations
  Eigen::MatrixXd pressure;  // P_ab = int v_a v_b f(dv)
  double energy = 0;         // trace(P)

  static MomentState from_pressure(const Eigen::VectorXd& mean, const Eigen::MatrixXd& pressure);
  void validate() const;  // symmetry, PSD, energy == trace(P)
};

// Sample mean and raw second-moment matrix of a point cloud (columns).
MomentState empirical_moments(const Eigen::MatrixXd& cloud);

struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // symmetric positive definite

  int dim() const { return int(mean.size()); }
  double log_density(const Eigen::VectorXd& x) const;
};

// Exact weak form of the collision operator paired with phi on an atomic
// measure:  (1/2) sum_{p,q} w_p w_q a(v_p - v_q) : (hess phi(v_p) + hess
// phi(v_q)) + sum_{p,q} w_p w_q b(v_p - v_q) . (grad phi(v_p) - grad
// phi(v_q)).
double collision_bracket(const EmpiricalMeasure& f, const Observable& phi,
                         const ModelParams& params);

// dP/dt for the zero-mean second-moment tensor: 4 lambda (E I - d P),
// E = trace(P).  Cross-checked against collision_bracket with quadratic
// monomials in the tests.
Eigen::MatrixXd pressure_rhs(const MomentState& m, const ModelParams& params);

// Closed-form flow of the second-moment tensor; trace is preserved.
MomentState evolve_pressure(const MomentState& p0, double t, const ModelParams& params);

// Centered Gaussian with covariance (E/d) I: the unique equilibrium on the
// energy-E, zero-momentum shell.
GaussianState equilibrium_gaussian(const ModelParams& params);

// KL divergence between Gaussians:
// (1/2)[trace(S_g^{-1} S_f) - d + (m_f - m_g)^T S_g^{-1} (m_f - m_g)
//       - log det(S_g^{-1} S_f)].
double gaussian_relative_entropy(const GaussianState& f, const GaussianState& gamma);

// int f log f = -(1/2) log((2 pi e)^d det Sigma)  (negative differential
// entropy sign convention).
double gaussian_entropy(const GaussianState& f);

}  // namespace landau
