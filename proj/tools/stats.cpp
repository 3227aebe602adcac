#include "stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace landau {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_of: empty sample");
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("sample_sd: need at least two values");
  const double m = mean_of(v);
  double s2 = 0;
  for (double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / double(v.size() - 1));
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
  const int m = int(x.size());
  if (m < 2) throw std::invalid_argument("linear_fit: need at least two points");
  double sx = 0, sy = 0;
  for (int i = 0; i < m; ++i) {
    sx += x[std::size_t(i)];
    sy += y[std::size_t(i)];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double dx = x[std::size_t(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (y[std::size_t(i)] - my);
  }
  if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");

  LinearFit fit;
  fit.points = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ssr = 0;
    for (int i = 0; i < m; ++i) {
      const double r = y[std::size_t(i)] - (fit.intercept + fit.slope * x[std::size_t(i)]);
      ssr += r * r;
    }
    fit.slope_std_error = std::sqrt(ssr / double(m - 2) / sxx);
  } else {
    fit.slope_std_error = std::numeric_limits<double>::infinity();
  }
  return fit;
}

// Continued fraction for the incomplete beta (modified Lentz evaluation).
static double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-15, kTiny = 1e-300;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("reg_inc_beta: continued fraction did not converge");
}

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("reg_inc_beta: a, b must be > 0");
  if (x < 0 || x > 1) throw std::invalid_argument("reg_inc_beta: x must be in [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // The continued fraction converges fast for x < (a+1)/(a+b+2); use the
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
  if (x < (a + 1) / (a + b + 2)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1 - x) / b;
}

double student_cdf(double t, int nu) {
  if (nu < 1) throw std::invalid_argument("student_cdf: nu must be >= 1");
  const double x = nu / (nu + t * t);
  const double half_tail = 0.5 * reg_inc_beta(0.5 * nu, 0.5, x);
  return t >= 0 ? 1.0 - half_tail : half_tail;
}

double p_value_slope_negative(const LinearFit& fit) {
  if (fit.points < 3 || !(fit.slope_std_error > 0) || !std::isfinite(fit.slope_std_error))
    return 1.0;  // no residual degrees of freedom: never significant
  return student_cdf(fit.slope / fit.slope_std_error, fit.points - 2);
}

}  // namespace landau
