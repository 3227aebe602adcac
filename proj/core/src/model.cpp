#include "landau/model.hpp"

namespace landau {

Eigen::MatrixXd coeff_a(const Eigen::VectorXd& z, const ModelParams& p) {
  const double z2 = z.squaredNorm();
  // scale the (exactly symmetric) outer product entrywise so the result is
  // bitwise symmetric; folding lambda into z first would break that
  const Eigen::MatrixXd outer = z * z.transpose();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p.d, p.d) * (p.lambda * z2);
  a -= p.lambda * outer;
  return a;
}

Eigen::VectorXd coeff_b(const Eigen::VectorXd& z, const ModelParams& p) {
  return (-p.lambda * (p.d - 1)) * z;
}

double coeff_c(const ModelParams& p) { return -p.lambda * p.d * (p.d - 1); }

Eigen::MatrixXd coeff_sigma(const Eigen::VectorXd& z, const ModelParams& p) {
  const double z2 = z.squaredNorm();
  if (z2 == 0.0) return Eigen::MatrixXd::Zero(p.d, p.d);
  const double r = std::sqrt(z2);
  const double s = std::sqrt(p.lambda);
  const Eigen::MatrixXd outer = z * z.transpose();  // exactly symmetric
  Eigen::MatrixXd sig = Eigen::MatrixXd::Identity(p.d, p.d) * (s * r);
  sig -= (s / r) * outer;
  return sig;
}

EmpiricalMeasure empirical(const ParticleState& state) {
  EmpiricalMeasure mu;
  mu.atoms = state.v;
  mu.weights = Eigen::VectorXd::Constant(state.n(), 1.0 / state.n());
  return mu;
}

double weight_MN(const ParticleState& state, const WeightFunction& m) {
  double s = 0.0;
  for (int i = 0; i < state.n(); ++i) s += m(state.v.col(i));
  return s / state.n();
}

Eigen::VectorXd mean_velocity(const Eigen::MatrixXd& v) { return v.rowwise().mean(); }

double centered_energy(const Eigen::MatrixXd& v, const Eigen::VectorXd& center) {
  double s = 0.0;
  for (int i = 0; i < v.cols(); ++i) s += (v.col(i) - center).squaredNorm();
  return s / v.cols();
}

}  // namespace landau
