// Small statistics kit for the experiment layer: ordinary least squares with
// slope standard errors and one-sided t-tests (regularized incomplete beta,
// no external dependency).

#pragma once

#include <vector>

namespace landau {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_std_error = 0;
  int points = 0;  // points actually used
};

// OLS fit of y against x.  Needs >= 3 points for a finite slope_std_error
// (residual variance has points - 2 degrees of freedom).
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double reg_inc_beta(double a, double b, double x);

// P(T <= t) for Student's t with nu degrees of freedom.
double student_cdf(double t, int nu);

// One-sided p-value for "slope < 0" from an OLS fit.
double p_value_slope_negative(const LinearFit& fit);

double mean_of(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);  // n-1 denominator

}  // namespace landau
