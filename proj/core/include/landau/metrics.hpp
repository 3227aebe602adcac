// Distances between laws from samples: exact and entropic Wasserstein on
// point clouds, characteristic-function distances on a quasi-random frequency
// shell, a moment-corrected Fourier norm, nearest-neighbor entropy
// estimation, and marginal observable gaps across ensembles.
//
// Point clouds are d x n matrices (one sample per column).  Every std-error
// is a resampling estimate; callers that assert use 3-sigma bands.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "landau/model.hpp"
#include "landau/moment_flow.hpp"
#include "landau/observables.hpp"

namespace landau {

struct MetricConfig {
  // Frequency shell xi_min <= |xi| <= xi_max, quasi-random (Halton), radius
  // log-uniform.  The shell floor keeps ecf noise ~ n^{-1/2} from being
  // amplified by the 1/|xi|^s division near 0.
  double xi_min = 0.25;
  double xi_max = 8.0;
  int xi_count = 2000;
  int s = 2;     // Fourier exponent (2, 4, or 6)
  int k_nn = 1;  // neighbor order for the entropy estimator

  int bootstrap = 200;       // resamples behind every Fourier std-error
  int top_frequencies = 64;  // bootstrap re-evaluates only the leading bins
  int entropy_subsamples = 32;  // half-size subsamples for entropy std-errors
  std::uint64_t seed = 0x6d7472u;  // resampling / jitter stream root

  double sinkhorn_reg = 1e-2;
  int sinkhorn_max_iter = 20000;
  double sinkhorn_tol = 1e-10;

  void validate() const;
};

struct MetricReport {
  std::string name;
  double value = 0;
  double std_error = 0;
  std::int64_t n_x = 0;
  std::int64_t n_y = 0;
  std::string params;  // semicolon-separated key=value echo (CSV-safe)

  // One CSV row: name,value,stderr,n_x,n_y,params
  std::string csv_row() const;
  static std::string csv_header();
};

// ((1/n) min over permutations of sum |x_i - y_perm(i)|^p)^{1/p}, exact.
double wasserstein_exact(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int p);

// Entropically regularized transport cost (Sinkhorn on the cost matrix
// |x_i - y_j|^p), reported as cost^{1/p}.  Upper bound shrinking to the exact
// value as reg -> 0.
double wasserstein_entropic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int p, double reg,
                            int max_iter = 20000, double tol = 1e-10);

// Quasi-random frequency shell (columns are xi vectors).
Eigen::MatrixXd fourier_grid(int d, const MetricConfig& cfg);

// Empirical characteristic function (1/n) sum_j exp(-i xi . x_j) at each
// column of xi.
Eigen::VectorXcd empirical_cf(const Eigen::MatrixXd& cloud, const Eigen::MatrixXd& xi);

// Smooth cutoff: 1 on |xi| <= 1, exp(1 - 1/(1 - (|xi|-1)^2)) on 1 < |xi| < 2,
// 0 beyond.
double fourier_bump(double r);

// sup over the shell of |ecf_x - ecf_y| / |xi|^s, with a bootstrap std-error
// (resampled on the leading frequencies).  Warns in `params` when empirical
// moments of orders < s disagree beyond sampling noise (the distance is then
// dominated by low-|xi| noise).
MetricReport fourier_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int s,
                              const MetricConfig& cfg);

// Moment-corrected norm: sup |ecf_x - m_hat| / |xi|^k + sum_{|alpha| <= k-1}
// |M_alpha|, where m_hat(xi) = bump(|xi|) sum M_alpha (-i)^{|alpha|}
// xi^alpha / alpha! subtracts the Taylor head of the characteristic function.
MetricReport fourier_norm_moment_corrected(const Eigen::MatrixXd& x, int k,
                                           const MetricConfig& cfg);

// Same norm applied to the difference of two empirical measures (their
// moments and characteristic functions subtract); when all moments below
// order k cancel this reduces to the plain Fourier distance.
MetricReport fourier_norm_moment_corrected_diff(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                                int k, const MetricConfig& cfg);

// Kozachenko-Leonenko k-nearest-neighbor estimate of int f log f (negative
// differential entropy).  Coincident points are deterministically jittered.
double knn_entropy(const Eigen::MatrixXd& cloud, int k_nn = 1,
                   std::uint64_t jitter_seed = 0x6d7472u);

// Subsampling (m = n/2 without replacement, rescaled by sqrt(m/n)) std-error
// for a statistic of a cloud; used for the entropy estimators whose bootstrap
// would break the distinct-points requirement.
double subsampled_std_error(const Eigen::MatrixXd& cloud,
                            const std::function<double(const Eigen::MatrixXd&)>& statistic,
                            int subsamples, std::uint64_t seed);

// int f log f - int f log gamma  estimated by knn_entropy plus the sample
// mean of -log gamma; std-error by subsampling the combined statistic.
MetricReport relative_entropy_vs_gaussian(const Eigen::MatrixXd& cloud, const GaussianState& gamma,
                                          const MetricConfig& cfg);

// | mean over realizations and distinct index tuples of prod_j phi_j(v_{i_j})
//   - prod_j reference_j |, with the across-realization std-error.
// Exact tuple enumeration via power sums for l <= 3, Monte Carlo tuples
// beyond.
MetricReport marginal_observable_gap(const std::vector<Eigen::MatrixXd>& ensemble,
                                     const std::vector<Observable>& factors,
                                     const std::vector<double>& reference,
                                     std::uint64_t seed = 0x6d7472u);

}  // namespace landau
