#include "landau/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "landau/moment_flow.hpp"
#include "landau/rng.hpp"
#include "landau/sphere.hpp"

namespace landau {

double eval_R(const PolynomialFunctional& Phi, const EmpiricalMeasure& f) {
  double prod = 1.0;
  for (const auto& phi : Phi.factors) {
    double s = 0;
    for (int p = 0; p < f.n(); ++p) s += f.weights[p] * phi.value(f.atoms.col(p));
    prod *= s;
  }
  return prod;
}

// <f, phi_j> for every factor.
static std::vector<double> factor_means(const PolynomialFunctional& Phi,
                                        const EmpiricalMeasure& f) {
  std::vector<double> s(Phi.factors.size(), 0.0);
  for (std::size_t j = 0; j < Phi.factors.size(); ++j)
    for (int p = 0; p < f.n(); ++p)
      s[j] += f.weights[p] * Phi.factors[j].value(f.atoms.col(p));
  return s;
}

// Leave-one-out products c_j = prod_{k != j} s_k.
static std::vector<double> leave_one_out(const std::vector<double>& s) {
  std::vector<double> c(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    double prod = 1.0;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (k != j) prod *= s[k];
    c[j] = prod;
  }
  return c;
}

// Leave-two-out products c_{jl} = prod_{k != j,l} s_k (j != l).
static Eigen::MatrixXd leave_two_out(const std::vector<double>& s) {
  const int l = int(s.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(l, l);
  for (int j = 0; j < l; ++j)
    for (int k = j + 1; k < l; ++k) {
      double prod = 1.0;
      for (int m = 0; m < l; ++m)
        if (m != j && m != k) prod *= s[m];
      c(j, k) = c(k, j) = prod;
    }
  return c;
}

Observable dR(const PolynomialFunctional& Phi, const EmpiricalMeasure& f) {
  if (Phi.order() == 0) throw std::invalid_argument("dR: empty functional");
  const int d = int(f.atoms.rows());
  const auto c = leave_one_out(factor_means(Phi, f));
  auto factors = Phi.factors;  // copies keep the closure self-contained
  Observable out;
  out.name = "dR";
  out.value = [factors, c](const Eigen::VectorXd& v) {
    double acc = 0;
    for (std::size_t j = 0; j < factors.size(); ++j) acc += c[j] * factors[j].value(v);
    return acc;
  };
  out.grad = [factors, c, d](const Eigen::VectorXd& v) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    for (std::size_t j = 0; j < factors.size(); ++j) acc += c[j] * factors[j].grad(v);
    return acc;
  };
  out.hess = [factors, c, d](const Eigen::VectorXd& v) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t j = 0; j < factors.size(); ++j) acc += c[j] * factors[j].hess(v);
    return acc;
  };
  return out;
}

double apply_GN_projected(const PolynomialFunctional& Phi, const ParticleState& state,
                          const ModelParams& params) {
  const int n = state.n();
  const int d = state.dim();
  const int l = Phi.order();
  if (l == 0) throw std::invalid_argument("apply_GN_projected: empty functional");

  const EmpiricalMeasure mu = empirical(state);
  const auto s = factor_means(Phi, mu);
  const auto c1 = leave_one_out(s);
  const Eigen::MatrixXd c2 = leave_two_out(s);

  // Per-factor gradients at every particle, and the combined per-particle
  // derivative data:
  //   grad_i (Phi . mu) = (1/N) sum_j c_j grad phi_j(v_i)            =: A_i
  //   hess_ii diagonal part = (1/N) sum_j c_j hess phi_j(v_i)        =: B_i
  //   cross part (any i,i') = (1/N^2) sum_{j != l} c_{jl} Dj_i Dl_i'^T
  std::vector<Eigen::MatrixXd> fgrad(l);  // fgrad[j]: d x n
  for (int j = 0; j < l; ++j) {
    fgrad[j].resize(d, n);
    for (int i = 0; i < n; ++i) fgrad[j].col(i) = Phi.factors[j].grad(state.v.col(i));
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, n);
  for (int j = 0; j < l; ++j) A += (c1[j] / n) * fgrad[j];
  std::vector<Eigen::MatrixXd> B(n, Eigen::MatrixXd::Zero(d, d));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < l; ++j) B[i] += (c1[j] / n) * Phi.factors[j].hess(state.v.col(i));

  const double inv_n2 = 1.0 / (double(n) * double(n));
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const Eigen::VectorXd z = state.v.col(i) - state.v.col(k);
      const Eigen::MatrixXd az = coeff_a(z, params);
      const Eigen::VectorXd bz = coeff_b(z, params);
      double term = 2.0 * bz.dot(A.col(i) - A.col(k)) + az.cwiseProduct(B[i] + B[k]).sum();
      // a : (C_ii + C_kk - C_ik - C_ki) telescopes into differences of the
      // per-factor gradients between the two particles.
      for (int j = 0; j < l; ++j) {
        const Eigen::VectorXd dj = fgrad[j].col(i) - fgrad[j].col(k);
        for (int m = j + 1; m < l; ++m) {
          const Eigen::VectorXd dm = fgrad[m].col(i) - fgrad[m].col(k);
          term += 2.0 * inv_n2 * c2(j, m) * dj.dot(az * dm);
        }
      }
      acc += term;
    }
  }
  return acc / n;
}

double apply_Ginf(const PolynomialFunctional& Phi, const EmpiricalMeasure& f,
                  const ModelParams& params) {
  return collision_bracket(f, dR(Phi, f), params);
}

ConsistencyGap consistency_gap(const PolynomialFunctional& Phi, const ParticleState& state,
                               const ModelParams& params) {
  ConsistencyGap gap;
  gap.raw = std::abs(apply_GN_projected(Phi, state, params) -
                     apply_Ginf(Phi, empirical(state), params));
  gap.normalized6 = gap.raw / weight_MN(state, bracket_weight(6));
  gap.normalized4 = gap.raw / weight_MN(state, bracket_weight(4));
  return gap;
}

static double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

static double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= 0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return 0;
  const double denom = m * sxx - sx * sx;
  return denom != 0 ? (m * sxy - sx * sy) / denom : 0.0;
}

ConsistencySweep consistency_sweep(const PolynomialFunctional& Phi, const std::vector<int>& n_list,
                                   double e0, int samples_per_n, std::uint64_t seed,
                                   const ModelParams& params) {
  if (n_list.size() < 2) throw std::invalid_argument("consistency_sweep: need at least two N");
  if (samples_per_n < 1) throw std::invalid_argument("consistency_sweep: need samples");
  ModelParams p = params;
  p.energy = e0;
  p.momentum = Eigen::VectorXd::Zero(p.d);

  ConsistencySweep sweep;
  std::vector<double> xs, med6;
  for (int n : n_list) {
    std::vector<double> g6, g4;
    double gmax = 0;
    for (int r = 0; r < samples_per_n; ++r) {
      BoltzmannSphereSpec spec;
      spec.n = n;
      spec.params = p;
      const ParticleState state = sample_uniform_sphere(spec, substream(seed, std::uint64_t(n)) + r);
      const ConsistencyGap gap = consistency_gap(Phi, state, p);
      g6.push_back(gap.normalized6);
      g4.push_back(gap.normalized4);
      gmax = std::max(gmax, gap.normalized6);
    }
    ConsistencySweepRow row;
    row.n = n;
    row.gap_median = median_of(g6);
    row.gap_max = gmax;
    row.gap_median4 = median_of(g4);
    xs.push_back(double(n));
    med6.push_back(row.gap_median);
    row.slope_running = loglog_slope(xs, med6);
    sweep.rows.push_back(row);
  }
  sweep.slope = sweep.rows.back().slope_running;

  double overall_max = 0;
  for (const auto& row : sweep.rows) overall_max = std::max(overall_max, row.gap_max);
  if (overall_max <= 1e-13 * (1.0 + e0)) {
    sweep.exact_zero = true;
    sweep.slope = 0;
  }
  return sweep;
}

double generator_g2(const TestFunction& phi, const ParticleState& state,
                    const ModelParams& params) {
  const int n = state.n();
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd gi = phi.grad(state.v, i);
    const Eigen::MatrixXd hii = phi.hess(state.v, i, i);
    for (int j = i + 1; j < n; ++j) {
      const Eigen::VectorXd z = state.v.col(i) - state.v.col(j);
      const Eigen::MatrixXd az = coeff_a(z, params);
      const Eigen::VectorXd bz = coeff_b(z, params);
      const Eigen::MatrixXd hc = hii + phi.hess(state.v, j, j);
      acc += 2.0 * bz.dot(gi - phi.grad(state.v, j)) + az.cwiseProduct(hc).sum();
    }
  }
  return acc / n;
}

}  // namespace landau
