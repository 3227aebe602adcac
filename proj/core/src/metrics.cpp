#include "landau/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "landau/assignment.hpp"
#include "landau/io.hpp"
#include "landau/rng.hpp"

namespace landau {

void MetricConfig::validate() const {
  if (!(xi_min > 0)) throw std::invalid_argument("MetricConfig: xi_min must be > 0");
  if (!(xi_max > xi_min)) throw std::invalid_argument("MetricConfig: xi_max must exceed xi_min");
  if (xi_count < 1) throw std::invalid_argument("MetricConfig: xi_count must be positive");
  if (s != 2 && s != 4 && s != 6)
    throw std::invalid_argument("MetricConfig: Fourier exponent s must be 2, 4, or 6");
  if (k_nn < 1 || k_nn > 16) throw std::invalid_argument("MetricConfig: k_nn out of range");
  if (bootstrap < 2) throw std::invalid_argument("MetricConfig: need at least 2 resamples");
  if (top_frequencies < 1) throw std::invalid_argument("MetricConfig: top_frequencies >= 1");
  if (entropy_subsamples < 2)
    throw std::invalid_argument("MetricConfig: entropy_subsamples >= 2");
  if (!(sinkhorn_reg > 0)) throw std::invalid_argument("MetricConfig: sinkhorn_reg must be > 0");
}

std::string MetricReport::csv_header() { return "name,value,stderr,n_x,n_y,params"; }

std::string MetricReport::csv_row() const {
  return name + "," + format_double(value) + "," + format_double(std_error) + "," +
         std::to_string(n_x) + "," + std::to_string(n_y) + "," + params;
}

// ---------------------------------------------------------------------------
// Wasserstein

static Eigen::MatrixXd pairwise_cost(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int p) {
  if (x.rows() != y.rows())
    throw std::invalid_argument("wasserstein: cloud dimensions disagree");
  if (p != 1 && p != 2) throw std::invalid_argument("wasserstein: p must be 1 or 2");
  Eigen::MatrixXd cost(x.cols(), y.cols());
  for (int j = 0; j < y.cols(); ++j)
    for (int i = 0; i < x.cols(); ++i) {
      const double d2 = (x.col(i) - y.col(j)).squaredNorm();
      cost(i, j) = (p == 2) ? d2 : std::sqrt(d2);
    }
  return cost;
}

double wasserstein_exact(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int p) {
  if (x.cols() != y.cols())
    throw std::invalid_argument("wasserstein_exact: clouds must have equal size");
  if (x.cols() == 0) throw std::invalid_argument("wasserstein_exact: empty clouds");
  const Eigen::MatrixXd cost = pairwise_cost(x, y, p);
  const double mean_cost = solve_assignment(cost).cost / double(x.cols());
  return (p == 2) ? std::sqrt(mean_cost) : mean_cost;
}

double wasserstein_entropic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int p, double reg,
                            int max_iter, double tol) {
  if (!(reg > 0)) throw std::invalid_argument("wasserstein_entropic: reg must be > 0");
  if (x.cols() == 0 || y.cols() == 0)
    throw std::invalid_argument("wasserstein_entropic: empty clouds");
  const Eigen::MatrixXd cost = pairwise_cost(x, y, p);
  const int nx = int(x.cols()), ny = int(y.cols());
  const double log_ax = -std::log(double(nx)), log_ay = -std::log(double(ny));

  // Log-domain Sinkhorn with uniform marginals: potentials f, g solve the
  // alternating softmin projections; the g update makes column marginals
  // exact, so convergence is monitored on the row marginals.
  Eigen::VectorXd f = Eigen::VectorXd::Zero(nx), g = Eigen::VectorXd::Zero(ny);
  const auto softmin_rows = [&](Eigen::VectorXd& out) {
    for (int i = 0; i < nx; ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < ny; ++j) m = std::max(m, (g[j] - cost(i, j)) / reg);
      double acc = 0;
      for (int j = 0; j < ny; ++j) acc += std::exp((g[j] - cost(i, j)) / reg - m);
      out[i] = -reg * (m + std::log(acc) + log_ay);
    }
  };
  const auto softmin_cols = [&](Eigen::VectorXd& out) {
    for (int j = 0; j < ny; ++j) {
      double m = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < nx; ++i) m = std::max(m, (f[i] - cost(i, j)) / reg);
      double acc = 0;
      for (int i = 0; i < nx; ++i) acc += std::exp((f[i] - cost(i, j)) / reg - m);
      out[j] = -reg * (m + std::log(acc) + log_ax);
    }
  };

  bool converged = false;
  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    softmin_rows(f);
    softmin_cols(g);
    if (iter % 5 != 4 && iter != max_iter - 1) continue;
    double row_err = 0;
    for (int i = 0; i < nx; ++i) {
      double mass = 0;
      for (int j = 0; j < ny; ++j)
        mass += std::exp((f[i] + g[j] - cost(i, j)) / reg + log_ax + log_ay);
      row_err += std::abs(mass - 1.0 / nx);
    }
    converged = row_err < tol;
  }
  if (!converged)
    throw std::runtime_error("wasserstein_entropic: Sinkhorn did not converge; raise reg or iterations");

  double transport = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      transport += std::exp((f[i] + g[j] - cost(i, j)) / reg + log_ax + log_ay) * cost(i, j);
  return (p == 2) ? std::sqrt(transport) : transport;
}

// ---------------------------------------------------------------------------
// Fourier shell and characteristic functions

static double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i) {
    f /= base;
    r += f * double(i % base);
    i /= base;
  }
  return r;
}

Eigen::MatrixXd fourier_grid(int d, const MetricConfig& cfg) {
  cfg.validate();
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const int pairs = (d + 1) / 2;
  if (2 * pairs + 1 > int(sizeof primes / sizeof *primes))
    throw std::invalid_argument("fourier_grid: dimension too large for the Halton bases");

  Eigen::MatrixXd grid(d, cfg.xi_count);
  const double log_ratio = std::log(cfg.xi_max / cfg.xi_min);
  for (int gidx = 0; gidx < cfg.xi_count; ++gidx) {
    const std::uint64_t idx = std::uint64_t(gidx) + 1;
    // Direction: Halton pairs -> Box-Muller normals -> normalize.
    Eigen::VectorXd z(d);
    for (int a = 0; a < pairs; ++a) {
      const double u1 = radical_inverse(idx, primes[2 * a]);
      const double u2 = radical_inverse(idx, primes[2 * a + 1]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double t = 2.0 * M_PI * u2;
      z[2 * a] = r * std::cos(t);
      if (2 * a + 1 < d) z[2 * a + 1] = r * std::sin(t);
    }
    const double zn = z.norm();
    // Radius log-uniform on [xi_min, xi_max]: resolves the shell floor where
    // the 1/|xi|^s weight is largest.
    const double u_r = radical_inverse(idx, primes[2 * pairs]);
    const double radius = cfg.xi_min * std::exp(log_ratio * u_r);
    grid.col(gidx) = (radius / (zn > 0 ? zn : 1.0)) * z;
  }
  return grid;
}

Eigen::VectorXcd empirical_cf(const Eigen::MatrixXd& cloud, const Eigen::MatrixXd& xi) {
  if (cloud.rows() != xi.rows()) throw std::invalid_argument("empirical_cf: dimension mismatch");
  if (cloud.cols() == 0) throw std::invalid_argument("empirical_cf: empty cloud");
  Eigen::VectorXcd out(xi.cols());
  for (int g = 0; g < xi.cols(); ++g) {
    const Eigen::ArrayXd phase = (cloud.transpose() * xi.col(g)).array();
    out[g] = std::complex<double>(phase.cos().mean(), -phase.sin().mean());
  }
  return out;
}

double fourier_bump(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// Multi-indices alpha with |alpha| <= max_order, lexicographic.
static void enumerate_multi_indices(int d, int max_order, std::vector<int>& cur,
                                    std::vector<std::vector<int>>& out, int remaining) {
  if (int(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  for (int a = 0; a <= remaining; ++a) {
    cur.push_back(a);
    enumerate_multi_indices(d, max_order, cur, out, remaining - a);
    cur.pop_back();
  }
}

static std::vector<std::vector<int>> multi_indices_up_to(int d, int max_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_multi_indices(d, max_order, cur, out, max_order);
  return out;
}

static int multi_order(const std::vector<int>& alpha) {
  int s = 0;
  for (int a : alpha) s += a;
  return s;
}

static double multi_factorial(const std::vector<int>& alpha) {
  double f = 1;
  for (int a : alpha)
    for (int t = 2; t <= a; ++t) f *= t;
  return f;
}

// Per-sample monomial values x^alpha (one row per point).
static Eigen::VectorXd monomial_values(const Eigen::MatrixXd& cloud,
                                       const std::vector<int>& alpha) {
  Eigen::VectorXd vals = Eigen::VectorXd::Ones(cloud.cols());
  for (int a = 0; a < int(alpha.size()); ++a)
    for (int t = 0; t < alpha[a]; ++t)
      vals.array() *= cloud.row(a).transpose().array();
  return vals;
}

// (-i)^m
static std::complex<double> minus_i_pow(int m) {
  switch (m & 3) {
    case 0: return {1, 0};
    case 1: return {0, -1};
    case 2: return {-1, 0};
    default: return {0, 1};
  }
}

static double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double mean = 0;
  for (double t : v) mean += t;
  mean /= double(v.size());
  double var = 0;
  for (double t : v) var += (t - mean) * (t - mean);
  return std::sqrt(var / double(v.size() - 1));
}

static int bounded_index(double u, int n) { return std::min(n - 1, int(u * n)); }

// exp(-i xi_k . x_j) for the selected frequencies; column j is point j.
static Eigen::MatrixXcd phase_matrix(const Eigen::MatrixXd& cloud, const Eigen::MatrixXd& grid,
                                     const std::vector<int>& sel) {
  Eigen::MatrixXcd p(sel.size(), cloud.cols());
  for (std::size_t k = 0; k < sel.size(); ++k) {
    const Eigen::ArrayXd phase = (cloud.transpose() * grid.col(sel[k])).array();
    p.row(k).real() = phase.cos().transpose();
    p.row(k).imag() = (-phase.sin()).transpose();
  }
  return p;
}

static std::vector<int> top_indices(const Eigen::VectorXd& crit, int k) {
  std::vector<int> order(crit.size());
  std::iota(order.begin(), order.end(), 0);
  const int keep = std::min<int>(k, int(order.size()));
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](int a, int b) { return crit[a] > crit[b]; });
  order.resize(keep);
  return order;
}

MetricReport fourier_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int s,
                              const MetricConfig& cfg) {
  MetricConfig c = cfg;
  c.s = s;
  c.validate();
  if (x.rows() != y.rows()) throw std::invalid_argument("fourier_distance: dimension mismatch");
  const int d = int(x.rows());
  const Eigen::MatrixXd grid = fourier_grid(d, c);
  const Eigen::VectorXcd cx = empirical_cf(x, grid);
  const Eigen::VectorXcd cy = empirical_cf(y, grid);

  Eigen::VectorXd crit(grid.cols());
  for (int g = 0; g < grid.cols(); ++g)
    crit[g] = std::abs(cx[g] - cy[g]) / std::pow(grid.col(g).norm(), double(s));
  const double value = crit.maxCoeff();

  // The 1/|xi|^s division is only meaningful when moments below order s
  // agree; flag pairs whose sample moments differ beyond combined noise.
  int moment_warnings = 0;
  for (const auto& alpha : multi_indices_up_to(d, s - 1)) {
    if (multi_order(alpha) == 0) continue;
    const Eigen::VectorXd mx = monomial_values(x, alpha);
    const Eigen::VectorXd my = monomial_values(y, alpha);
    const double se_x = sample_std({mx.data(), mx.data() + mx.size()}) / std::sqrt(double(mx.size()));
    const double se_y = sample_std({my.data(), my.data() + my.size()}) / std::sqrt(double(my.size()));
    if (std::abs(mx.mean() - my.mean()) > 5.0 * (se_x + se_y) + 1e-12) ++moment_warnings;
  }

  // Bootstrap std-error, re-evaluated on the leading frequencies only.
  const std::vector<int> sel = top_indices(crit, c.top_frequencies);
  const Eigen::MatrixXcd px = phase_matrix(x, grid, sel);
  const Eigen::MatrixXcd py = phase_matrix(y, grid, sel);
  Eigen::VectorXd inv_xs(sel.size());
  for (std::size_t k = 0; k < sel.size(); ++k)
    inv_xs[k] = 1.0 / std::pow(grid.col(sel[k]).norm(), double(s));

  RngStream rs(c.seed, stream::kBootstrap);
  const int nx = int(x.cols()), ny = int(y.cols());
  std::vector<double> stats(c.bootstrap);
  Eigen::VectorXcd sx(sel.size()), sy(sel.size());
  for (int b = 0; b < c.bootstrap; ++b) {
    sx.setZero();
    sy.setZero();
    for (int t = 0; t < nx; ++t) sx += px.col(bounded_index(rs.uniform(2 * b, t), nx));
    for (int t = 0; t < ny; ++t) sy += py.col(bounded_index(rs.uniform(2 * b + 1, t), ny));
    double m = 0;
    for (std::size_t k = 0; k < sel.size(); ++k)
      m = std::max(m, std::abs(sx[k] / double(nx) - sy[k] / double(ny)) * inv_xs[k]);
    stats[b] = m;
  }

  MetricReport report;
  report.name = "fourier_distance";
  report.value = value;
  report.std_error = sample_std(stats);
  report.n_x = nx;
  report.n_y = ny;
  report.params = "s=" + std::to_string(s) + ";grid=" + std::to_string(c.xi_count) +
                  ";xi_min=" + format_double(c.xi_min) + ";xi_max=" + format_double(c.xi_max) +
                  ";moment_warnings=" + std::to_string(moment_warnings);
  return report;
}

// Shared implementation of the moment-corrected norm for a measure (y null)
// or a difference of measures.
static MetricReport moment_corrected_impl(const Eigen::MatrixXd& x, const Eigen::MatrixXd* y,
                                          int k, const MetricConfig& cfg) {
  cfg.validate();
  if (k < 2 || k > 6)
    throw std::invalid_argument("fourier_norm_moment_corrected: k must be in {2,...,6}");
  const int d = int(x.rows());
  if (y && y->rows() != d)
    throw std::invalid_argument("fourier_norm_moment_corrected: dimension mismatch");
  const Eigen::MatrixXd grid = fourier_grid(d, cfg);
  const auto alphas = multi_indices_up_to(d, k - 1);
  const int nx = int(x.cols()), ny = y ? int(y->cols()) : 0;

  // Empirical moments of the (signed) measure and the per-point monomials
  // used for resampling.
  std::vector<Eigen::VectorXd> wx(alphas.size()), wy(alphas.size());
  std::vector<double> moments(alphas.size());
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    wx[a] = monomial_values(x, alphas[a]);
    moments[a] = wx[a].mean();
    if (y) {
      wy[a] = monomial_values(*y, alphas[a]);
      moments[a] -= wy[a].mean();
    }
  }

  const Eigen::VectorXcd cf_x = empirical_cf(x, grid);
  Eigen::VectorXcd cf = cf_x;
  if (y) cf -= empirical_cf(*y, grid);

  // Taylor head M_hat(xi) = bump(|xi|) sum_alpha M_alpha (-i)^|a| xi^a / a!.
  const auto taylor_head = [&](const Eigen::VectorXd& xi, const std::vector<double>& m) {
    std::complex<double> head(0, 0);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      double xi_pow = 1;
      for (int ax = 0; ax < d; ++ax)
        for (int t = 0; t < alphas[a][ax]; ++t) xi_pow *= xi[ax];
      head += m[a] * minus_i_pow(multi_order(alphas[a])) * xi_pow / multi_factorial(alphas[a]);
    }
    return head * fourier_bump(xi.norm());
  };

  Eigen::VectorXd crit(grid.cols());
  for (int g = 0; g < grid.cols(); ++g)
    crit[g] = std::abs(cf[g] - taylor_head(grid.col(g), moments)) /
              std::pow(grid.col(g).norm(), double(k));
  double moment_sum = 0;
  for (double m : moments) moment_sum += std::abs(m);
  const double value = crit.maxCoeff() + moment_sum;

  // Resampled std-error on the leading frequencies (moments recomputed per
  // resample so the statistic is bootstrapped as a whole).
  const std::vector<int> sel = top_indices(crit, cfg.top_frequencies);
  const Eigen::MatrixXcd px = phase_matrix(x, grid, sel);
  const Eigen::MatrixXcd py = y ? phase_matrix(*y, grid, sel) : Eigen::MatrixXcd();
  RngStream rs(cfg.seed, stream::kBootstrap);
  std::vector<double> stats(cfg.bootstrap);
  std::vector<int> idx;
  std::vector<double> bm(alphas.size());
  for (int b = 0; b < cfg.bootstrap; ++b) {
    Eigen::VectorXcd scx = Eigen::VectorXcd::Zero(sel.size());
    std::fill(bm.begin(), bm.end(), 0.0);
    for (int t = 0; t < nx; ++t) {
      const int j = bounded_index(rs.uniform(2 * b, t), nx);
      scx += px.col(j);
      for (std::size_t a = 0; a < alphas.size(); ++a) bm[a] += wx[a][j];
    }
    scx /= double(nx);
    for (std::size_t a = 0; a < alphas.size(); ++a) bm[a] /= double(nx);
    if (y) {
      Eigen::VectorXcd scy = Eigen::VectorXcd::Zero(sel.size());
      std::vector<double> bmy(alphas.size(), 0.0);
      for (int t = 0; t < ny; ++t) {
        const int j = bounded_index(rs.uniform(2 * b + 1, t), ny);
        scy += py.col(j);
        for (std::size_t a = 0; a < alphas.size(); ++a) bmy[a] += wy[a][j];
      }
      scx -= scy / double(ny);
      for (std::size_t a = 0; a < alphas.size(); ++a) bm[a] -= bmy[a] / double(ny);
    }
    double m = 0;
    for (std::size_t kk = 0; kk < sel.size(); ++kk) {
      const Eigen::VectorXd xi = grid.col(sel[kk]);
      m = std::max(m, std::abs(scx[kk] - taylor_head(xi, bm)) / std::pow(xi.norm(), double(k)));
    }
    double ms = 0;
    for (double t : bm) ms += std::abs(t);
    stats[b] = m + ms;
  }

  MetricReport report;
  report.name = y ? "fourier_norm_moment_corrected_diff" : "fourier_norm_moment_corrected";
  report.value = value;
  report.std_error = sample_std(stats);
  report.n_x = nx;
  report.n_y = ny;
  report.params = "k=" + std::to_string(k) + ";grid=" + std::to_string(cfg.xi_count);
  return report;
}

MetricReport fourier_norm_moment_corrected(const Eigen::MatrixXd& x, int k,
                                           const MetricConfig& cfg) {
  return moment_corrected_impl(x, nullptr, k, cfg);
}

MetricReport fourier_norm_moment_corrected_diff(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                                int k, const MetricConfig& cfg) {
  return moment_corrected_impl(x, &y, k, cfg);
}

// ---------------------------------------------------------------------------
// Entropy estimators

static double digamma(double x) {
  double r = 0;
  while (x < 6) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  return r + std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

// Squared distance to the k-th nearest neighbor for every point, brute force.
static Eigen::VectorXd knn_sq_distances(const Eigen::MatrixXd& cloud, int k) {
  const int n = int(cloud.cols());
  Eigen::MatrixXd best(k, n);
  best.setConstant(std::numeric_limits<double>::infinity());
  const auto push = [&](int col, double d2) {
    if (d2 >= best(k - 1, col)) return;
    int at = k - 1;
    while (at > 0 && best(at - 1, col) > d2) {
      best(at, col) = best(at - 1, col);
      --at;
    }
    best(at, col) = d2;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (cloud.col(i) - cloud.col(j)).squaredNorm();
      push(i, d2);
      push(j, d2);
    }
  return best.row(k - 1).transpose();
}

double knn_entropy(const Eigen::MatrixXd& cloud, int k_nn, std::uint64_t jitter_seed) {
  const int d = int(cloud.rows());
  const int n = int(cloud.cols());
  if (k_nn < 1) throw std::invalid_argument("knn_entropy: k_nn must be >= 1");
  if (n < k_nn + 1) throw std::invalid_argument("knn_entropy: need more samples than neighbors");

  Eigen::MatrixXd pts = cloud;
  Eigen::VectorXd r2 = knn_sq_distances(pts, k_nn);
  if (r2.minCoeff() <= 0) {
    // Deterministic tie-break: jitter every point at 1e-12 of the spread.
    const Eigen::VectorXd center = pts.rowwise().mean();
    const double spread = (pts.colwise() - center).cwiseAbs().maxCoeff();
    if (spread == 0) throw std::invalid_argument("knn_entropy: degenerate cloud (all points equal)");
    RngStream rs(jitter_seed, stream::kMetrics);
    std::vector<double> noise(static_cast<std::size_t>(d));
    for (int i = 0; i < n; ++i) {
      rs.fill_normals(0xA11E, std::uint64_t(i), noise);
      for (int a = 0; a < d; ++a) pts(a, i) += 1e-12 * spread * noise[std::size_t(a)];
    }
    r2 = knn_sq_distances(pts, k_nn);
    if (r2.minCoeff() <= 0)
      throw std::runtime_error("knn_entropy: ties persisted after jitter");
  }

  // Kozachenko-Leonenko: h = psi(n) - psi(k) + log V_d + (d/n) sum log r_k;
  // returned with the int f log f sign (= -h).
  const double log_vd =
      0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
  const double mean_log_r = 0.5 * r2.array().log().mean();
  const double h = digamma(n) - digamma(k_nn) + log_vd + d * mean_log_r;
  return -h;
}

double subsampled_std_error(const Eigen::MatrixXd& cloud,
                            const std::function<double(const Eigen::MatrixXd&)>& statistic,
                            int subsamples, std::uint64_t seed) {
  const int n = int(cloud.cols());
  const int m = n / 2;
  if (m < 2) throw std::invalid_argument("subsampled_std_error: cloud too small");
  if (subsamples < 2) throw std::invalid_argument("subsampled_std_error: need >= 2 subsamples");

  RngStream rs(seed, stream::kBootstrap);
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::vector<double> vals(static_cast<std::size_t>(subsamples));
  Eigen::MatrixXd sub(cloud.rows(), m);
  for (int b = 0; b < subsamples; ++b) {
    std::iota(idx.begin(), idx.end(), 0);
    for (int t = 0; t < m; ++t) {
      const std::uint64_t u = rs.raw64(0x5B5B + b, std::uint64_t(t)) % std::uint64_t(n - t);
      std::swap(idx[std::size_t(t)], idx[std::size_t(t) + u]);
      sub.col(t) = cloud.col(idx[std::size_t(t)]);
    }
    vals[std::size_t(b)] = statistic(sub);
  }
  // Var(stat_n) ~ (m/n) Var(stat_m) for root-n statistics.
  return sample_std(vals) * std::sqrt(double(m) / double(n));
}

MetricReport relative_entropy_vs_gaussian(const Eigen::MatrixXd& cloud, const GaussianState& gamma,
                                          const MetricConfig& cfg) {
  cfg.validate();
  if (int(cloud.rows()) != gamma.dim())
    throw std::invalid_argument("relative_entropy_vs_gaussian: dimension mismatch");
  const auto statistic = [&](const Eigen::MatrixXd& pts) {
    double cross = 0;
    for (int i = 0; i < pts.cols(); ++i) cross -= gamma.log_density(pts.col(i));
    return knn_entropy(pts, cfg.k_nn, cfg.seed) + cross / double(pts.cols());
  };
  MetricReport report;
  report.name = "relative_entropy_vs_gaussian";
  report.value = statistic(cloud);
  report.std_error = subsampled_std_error(cloud, statistic, cfg.entropy_subsamples, cfg.seed);
  report.n_x = cloud.cols();
  report.n_y = 0;
  report.params = "k_nn=" + std::to_string(cfg.k_nn) +
                  ";subsamples=" + std::to_string(cfg.entropy_subsamples);
  return report;
}

// ---------------------------------------------------------------------------
// Marginal observable gaps

// Mean of prod_j phi_j(v_{i_j}) over distinct index tuples of one
// configuration; power-sum identities for l <= 3, Monte Carlo beyond.
static double tuple_mean(const Eigen::MatrixXd& v, const std::vector<Eigen::VectorXd>& fvals,
                         SequentialRng* rng) {
  const int n = int(v.cols());
  const int l = int(fvals.size());
  if (l == 1) return fvals[0].mean();
  if (l == 2) {
    const double s1 = fvals[0].sum(), s2 = fvals[1].sum();
    const double q12 = fvals[0].dot(fvals[1]);
    return (s1 * s2 - q12) / (double(n) * (n - 1));
  }
  if (l == 3) {
    const double s1 = fvals[0].sum(), s2 = fvals[1].sum(), s3 = fvals[2].sum();
    const double q12 = fvals[0].dot(fvals[1]);
    const double q13 = fvals[0].dot(fvals[2]);
    const double q23 = fvals[1].dot(fvals[2]);
    const double t = (fvals[0].array() * fvals[1].array() * fvals[2].array()).sum();
    return (s1 * s2 * s3 - s1 * q23 - s2 * q13 - s3 * q12 + 2.0 * t) /
           (double(n) * (n - 1) * (n - 2));
  }
  // Monte Carlo over distinct tuples.
  const int draws = 20000;
  std::vector<int> pick(static_cast<std::size_t>(l));
  double acc = 0;
  for (int t = 0; t < draws; ++t) {
    for (int j = 0; j < l; ++j) {
      for (;;) {
        const int cand = int(rng->uniform_index(std::uint64_t(n)));
        bool dup = false;
        for (int m = 0; m < j; ++m) dup |= (pick[std::size_t(m)] == cand);
        if (!dup) {
          pick[std::size_t(j)] = cand;
          break;
        }
      }
    }
    double prod = 1;
    for (int j = 0; j < l; ++j) prod *= fvals[std::size_t(j)][pick[std::size_t(j)]];
    acc += prod;
  }
  return acc / draws;
}

MetricReport marginal_observable_gap(const std::vector<Eigen::MatrixXd>& ensemble,
                                     const std::vector<Observable>& factors,
                                     const std::vector<double>& reference, std::uint64_t seed) {
  const int r = int(ensemble.size());
  const int l = int(factors.size());
  if (r < 2) throw std::invalid_argument("marginal_observable_gap: need at least 2 realizations");
  if (l < 1) throw std::invalid_argument("marginal_observable_gap: need at least one factor");
  if (reference.size() != factors.size())
    throw std::invalid_argument("marginal_observable_gap: reference size mismatch");

  std::vector<double> per_real(static_cast<std::size_t>(r));
  for (int rr = 0; rr < r; ++rr) {
    const Eigen::MatrixXd& v = ensemble[std::size_t(rr)];
    const int n = int(v.cols());
    if (l > n) throw std::invalid_argument("marginal_observable_gap: tuple order exceeds N");
    std::vector<Eigen::VectorXd> fvals(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j) {
      fvals[std::size_t(j)].resize(n);
      for (int i = 0; i < n; ++i) fvals[std::size_t(j)][i] = factors[std::size_t(j)].value(v.col(i));
    }
    SequentialRng rng(substream(seed, std::uint64_t(rr)), stream::kMetrics);
    per_real[std::size_t(rr)] = tuple_mean(v, fvals, &rng);
  }

  double mean = 0;
  for (double t : per_real) mean += t;
  mean /= double(r);
  double ref_prod = 1;
  for (double t : reference) ref_prod *= t;

  MetricReport report;
  report.name = "marginal_observable_gap";
  report.value = std::abs(mean - ref_prod);
  report.std_error = sample_std(per_real) / std::sqrt(double(r));
  report.n_x = r;
  report.n_y = ensemble.front().cols();
  report.params = "l=" + std::to_string(l);
  return report;
}

}  // namespace landau
