#include "landau/moment_flow.hpp"

#include <cmath>
#include <stdexcept>

namespace landau {

MomentState MomentState::from_pressure(const Eigen::VectorXd& mean,
                                       const Eigen::MatrixXd& pressure) {
  MomentState m;
  m.mean = mean;
  m.pressure = pressure;
  m.energy = pressure.trace();
  m.validate();
  return m;
}

void MomentState::validate() const {
  if (pressure.rows() != pressure.cols() || pressure.rows() != mean.size())
    throw std::invalid_argument("MomentState: dimension mismatch");
  if ((pressure - pressure.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + energy))
    throw std::invalid_argument("MomentState: pressure tensor must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pressure);
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + energy))
    throw std::invalid_argument("MomentState: pressure tensor must be positive semidefinite");
  if (std::abs(energy - pressure.trace()) > 1e-12 * (1.0 + std::abs(energy)))
    throw std::invalid_argument("MomentState: energy must equal trace(pressure)");
}

MomentState empirical_moments(const Eigen::MatrixXd& cloud) {
  if (cloud.cols() == 0) throw std::invalid_argument("empirical_moments: empty cloud");
  MomentState m;
  m.mean = cloud.rowwise().mean();
  m.pressure = (cloud * cloud.transpose()) / double(cloud.cols());
  m.pressure = 0.5 * (m.pressure + m.pressure.transpose()).eval();
  m.energy = m.pressure.trace();
  return m;
}

double GaussianState::log_density(const Eigen::VectorXd& x) const {
  const int d = dim();
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("GaussianState: covariance must be positive definite");
  const Eigen::VectorXd y = llt.matrixL().solve(x - mean);
  double log_det = 0;
  for (int a = 0; a < d; ++a) log_det += 2.0 * std::log(llt.matrixL()(a, a));
  return -0.5 * (d * std::log(2.0 * M_PI) + log_det + y.squaredNorm());
}

double collision_bracket(const EmpiricalMeasure& f, const Observable& phi,
                         const ModelParams& params) {
  const int n = f.n();
  // Atom-diagonal terms vanish (a(0) = b(0) = 0); each unordered pair enters
  // the ordered double sum twice, and both summands are p <-> q symmetric.
  double acc = 0;
  for (int p = 0; p < n; ++p) {
    const Eigen::VectorXd vp = f.atoms.col(p);
    const Eigen::MatrixXd hp = phi.hess(vp);
    const Eigen::VectorXd gp = phi.grad(vp);
    for (int q = p + 1; q < n; ++q) {
      const Eigen::VectorXd vq = f.atoms.col(q);
      const Eigen::VectorXd z = vp - vq;
      const double w = f.weights[p] * f.weights[q];
      const Eigen::MatrixXd az = coeff_a(z, params);
      const Eigen::VectorXd bz = coeff_b(z, params);
      acc += w * (az.cwiseProduct(hp + phi.hess(vq)).sum() +
                  2.0 * bz.dot(gp - phi.grad(vq)));
    }
  }
  return acc;
}

Eigen::MatrixXd pressure_rhs(const MomentState& m, const ModelParams& params) {
  if (m.mean.size() != params.d || m.pressure.rows() != params.d)
    throw std::invalid_argument("pressure_rhs: dimension mismatch");
  if (m.mean.norm() > 1e-10 * (1.0 + std::sqrt(m.energy)))
    throw std::invalid_argument("pressure_rhs: zero-mean convention (translate inputs first)");
  const double e = m.pressure.trace();
  return 4.0 * params.lambda *
         (e * Eigen::MatrixXd::Identity(params.d, params.d) - params.d * m.pressure);
}

MomentState evolve_pressure(const MomentState& p0, double t, const ModelParams& params) {
  if (p0.mean.size() != params.d || p0.pressure.rows() != params.d)
    throw std::invalid_argument("evolve_pressure: dimension mismatch");
  if (p0.mean.norm() > 1e-10 * (1.0 + std::sqrt(p0.energy)))
    throw std::invalid_argument("evolve_pressure: zero-mean convention (translate inputs first)");
  if (t < 0) throw std::invalid_argument("evolve_pressure: t must be nonnegative");
  const double e = p0.pressure.trace();
  const Eigen::MatrixXd eq = (e / params.d) * Eigen::MatrixXd::Identity(params.d, params.d);
  const double decay = std::exp(-4.0 * params.lambda * params.d * t);
  MomentState out;
  out.mean = Eigen::VectorXd::Zero(params.d);
  out.pressure = eq + decay * (p0.pressure - eq);
  out.energy = out.pressure.trace();
  return out;
}

GaussianState equilibrium_gaussian(const ModelParams& params) {
  if (!(params.energy > 0))
    throw std::invalid_argument("equilibrium_gaussian: energy must be positive");
  GaussianState g;
  g.mean = Eigen::VectorXd::Zero(params.d);
  g.covariance = (params.energy / params.d) * Eigen::MatrixXd::Identity(params.d, params.d);
  return g;
}

double gaussian_relative_entropy(const GaussianState& f, const GaussianState& gamma) {
  const int d = f.dim();
  if (gamma.dim() != d) throw std::invalid_argument("gaussian_relative_entropy: dim mismatch");
  Eigen::LLT<Eigen::MatrixXd> lg(gamma.covariance);
  Eigen::LLT<Eigen::MatrixXd> lf(f.covariance);
  if (lg.info() != Eigen::Success || lf.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_relative_entropy: singular covariance");
  const Eigen::MatrixXd ratio = lg.solve(f.covariance);  // S_g^{-1} S_f
  const Eigen::VectorXd dm = f.mean - gamma.mean;
  double log_det_g = 0, log_det_f = 0;
  for (int a = 0; a < d; ++a) {
    log_det_g += 2.0 * std::log(lg.matrixL()(a, a));
    log_det_f += 2.0 * std::log(lf.matrixL()(a, a));
  }
  return 0.5 * (ratio.trace() - d + dm.dot(lg.solve(dm)) - (log_det_f - log_det_g));
}

double gaussian_entropy(const GaussianState& f) {
  const int d = f.dim();
  Eigen::LLT<Eigen::MatrixXd> llt(f.covariance);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian_entropy: singular covariance");
  double log_det = 0;
  for (int a = 0; a < d; ++a) log_det += 2.0 * std::log(llt.matrixL()(a, a));
  return -0.5 * (d * std::log(2.0 * M_PI * std::exp(1.0)) + log_det);
}

}  // namespace landau
