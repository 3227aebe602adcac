#include "landau/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace landau {

void BoltzmannSphereSpec::validate() const {
  params.validate();
  if (n < 2) throw std::invalid_argument("BoltzmannSphereSpec: need N >= 2");
  if (!(params.energy > 0))
    throw std::invalid_argument("BoltzmannSphereSpec: need E > 0 (manifold degenerates)");
}

DensitySpec DensitySpec::gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  DensitySpec f;
  f.components.push_back({1.0, mean, cov});
  return f;
}

DensitySpec DensitySpec::mixture(const std::vector<GaussianComponent>& comps) {
  if (comps.empty()) throw std::invalid_argument("DensitySpec: empty mixture");
  DensitySpec f;
  f.components = comps;
  double w = 0;
  for (const auto& c : comps) w += c.weight;
  for (auto& c : f.components) c.weight /= w;
  return f;
}

DensitySpec DensitySpec::symmetric_bimodal(const Eigen::VectorXd& center, double var) {
  const int d = int(center.size());
  const Eigen::MatrixXd cov = var * Eigen::MatrixXd::Identity(d, d);
  return mixture({{0.5, center, cov}, {0.5, (-center).eval(), cov}});
}

int DensitySpec::dim() const {
  if (!components.empty()) return int(components.front().mean.size());
  if (custom_mean) return int(custom_mean->size());
  throw std::logic_error("DensitySpec: no dimension information");
}

Eigen::VectorXd DensitySpec::mean() const {
  if (custom_mean) return *custom_mean;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim());
  for (const auto& c : components) m += c.weight * c.mean;
  return m;
}

Eigen::MatrixXd DensitySpec::covariance() const {
  if (custom_cov) return *custom_cov;
  const Eigen::VectorXd m = mean();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  for (const auto& c : components) {
    const Eigen::VectorXd r = c.mean - m;
    s += c.weight * (c.cov + r * r.transpose());
  }
  return s;
}

double DensitySpec::energy() const { return covariance().trace() + mean().squaredNorm(); }

double DensitySpec::sixth_moment_bound() const {
  // E|X|^6 <= sum_k w_k E|m_k + G_k|^6 <= sum_k w_k 32 (|m_k|^6 + 15 tr(cov_k)^3),
  // using (x+y)^6 <= 32(x^6+y^6) and E|G|^6 <= 15 (tr cov)^3 for Gaussian G.
  double b = 0;
  for (const auto& c : components) {
    const double m2 = c.mean.squaredNorm();
    const double t = c.cov.trace();
    b += c.weight * 32.0 * (m2 * m2 * m2 + 15.0 * t * t * t);
  }
  return b;
}

Eigen::VectorXd DensitySpec::sample(SequentialRng& rng) const {
  if (custom_sampler) return custom_sampler(rng);
  // Pick a component, then mean + chol(cov) * z.
  double u = rng.uniform();
  std::size_t k = 0;
  for (; k + 1 < components.size(); ++k) {
    if (u < components[k].weight) break;
    u -= components[k].weight;
  }
  const auto& c = components[k];
  const int d = int(c.mean.size());
  Eigen::VectorXd z(d);
  for (int a = 0; a < d; ++a) z(a) = rng.normal();
  const Eigen::MatrixXd L = c.cov.llt().matrixL();
  return c.mean + L * z;
}

double DensitySpec::log_density(const Eigen::VectorXd& v) const {
  if (custom_log_density) return custom_log_density(v);
  const int d = int(v.size());
  double acc = 0.0;
  for (const auto& c : components) {
    const Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
    const Eigen::VectorXd r = v - c.mean;
    const Eigen::VectorXd y = llt.matrixL().solve(r);
    double logdet = 0;
    for (int a = 0; a < d; ++a) logdet += std::log(llt.matrixL()(a, a));
    const double logphi =
        -0.5 * y.squaredNorm() - logdet - 0.5 * d * std::log(2.0 * M_PI);
    acc += c.weight * std::exp(logphi);
  }
  return std::log(acc);
}

ParticleState project_to_sphere(const ParticleState& state, const BoltzmannSphereSpec& spec) {
  spec.validate();
  const int n = state.n();
  const Eigen::VectorXd mean = mean_velocity(state.v);
  const double ec = centered_energy(state.v, mean);
  if (ec < 1e-300)
    throw std::runtime_error("project_to_sphere: degenerate configuration (zero centered energy)");
  const double scale = std::sqrt(spec.params.energy / ec);
  const Eigen::VectorXd M = spec.params.momentum_or_zero();
  ParticleState out;
  out.time = state.time;
  out.v.resize(state.dim(), n);
  for (int i = 0; i < n; ++i) out.v.col(i) = M + scale * (state.v.col(i) - mean);
  return out;
}

ParticleState sample_uniform_sphere(const BoltzmannSphereSpec& spec, std::uint64_t seed,
                                    std::uint64_t stream_id) {
  spec.validate();
  SequentialRng rng(seed, stream_id);
  ParticleState s;
  s.v.resize(spec.params.d, spec.n);
  for (;;) {
    for (int i = 0; i < spec.n; ++i)
      for (int a = 0; a < spec.params.d; ++a) s.v(a, i) = rng.normal();
    const Eigen::VectorXd mean = mean_velocity(s.v);
    if (centered_energy(s.v, mean) >= 1e-300) break;  // retry degenerate draw
  }
  return project_to_sphere(s, spec);
}

ParticleState sample_conditioned_tensor(const DensitySpec& f0, const BoltzmannSphereSpec& spec,
                                        std::uint64_t seed, std::uint64_t stream_id,
                                        Eigen::MatrixXd* iid_out) {
  spec.validate();
  if (f0.mean().norm() > 1e-9)
    throw std::invalid_argument("sample_conditioned_tensor: f0 must have zero mean");
  if (std::abs(f0.energy() - spec.params.energy) > 1e-9 * std::max(1.0, spec.params.energy))
    throw std::invalid_argument("sample_conditioned_tensor: f0 energy must equal spec energy");
  SequentialRng rng(seed, stream_id);
  ParticleState s;
  s.v.resize(spec.params.d, spec.n);
  for (int i = 0; i < spec.n; ++i) s.v.col(i) = f0.sample(rng);
  if (iid_out) *iid_out = s.v;
  return project_to_sphere(s, spec);
}

ParticleState sample_conditioned_tensor(const DensitySpec& f0, const BoltzmannSphereSpec& spec,
                                        std::uint64_t seed, std::uint64_t stream_id) {
  return sample_conditioned_tensor(f0, spec, seed, stream_id, nullptr);
}

}  // namespace landau
