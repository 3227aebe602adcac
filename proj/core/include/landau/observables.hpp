// One-particle C^2 observables phi: R^d -> R carrying closed-form gradient and
// Hessian closures.  These are the factors of polynomial functionals on
// measures, the integrands of weak-form collision brackets, and the building
// blocks of N-particle test functions.
//
// Shipped library: constants, coordinates, |v|^2, Gaussian bumps
// exp(-|v-u|^2/(2 w^2)), and damped monomials v^alpha exp(-|v|^2/4).

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace landau {

struct Observable {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hess;
  std::string name;
};

Observable constant_one(int d);
Observable coordinate(int axis, int d);
Observable squared_norm(int d);
// exp(-|v-center|^2 / (2 width^2))
Observable gaussian_bump(const Eigen::VectorXd& center, double width = 1.0);
// (prod_a v_a^{alpha_a}) * exp(-|v|^2/4); alpha has one entry per axis.
Observable damped_monomial(const std::vector<int>& alpha);
// v_axis1 * v_axis2 (plain quadratic monomial; used for moment brackets)
Observable quadratic_monomial(int axis1, int axis2, int d);

}  // namespace landau
