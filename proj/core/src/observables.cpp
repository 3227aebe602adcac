#include "landau/observables.hpp"

#include <cmath>

namespace landau {

Observable constant_one(int d) {
  Observable o;
  o.name = "1";
  o.value = [](const Eigen::VectorXd&) { return 1.0; };
  o.grad = [d](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d).eval(); };
  o.hess = [d](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(d, d).eval(); };
  return o;
}

Observable coordinate(int axis, int d) {
  Observable o;
  o.name = "v" + std::to_string(axis + 1);
  o.value = [axis](const Eigen::VectorXd& v) { return v(axis); };
  o.grad = [axis, d](const Eigen::VectorXd&) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    g(axis) = 1.0;
    return g;
  };
  o.hess = [d](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(d, d).eval(); };
  return o;
}

Observable squared_norm(int d) {
  Observable o;
  o.name = "|v|^2";
  o.value = [](const Eigen::VectorXd& v) { return v.squaredNorm(); };
  o.grad = [](const Eigen::VectorXd& v) { return (2.0 * v).eval(); };
  o.hess = [d](const Eigen::VectorXd&) {
    return (2.0 * Eigen::MatrixXd::Identity(d, d)).eval();
  };
  return o;
}

Observable gaussian_bump(const Eigen::VectorXd& center, double width) {
  Observable o;
  o.name = "bump";
  const double w2 = width * width;
  const Eigen::VectorXd u = center;
  o.value = [u, w2](const Eigen::VectorXd& v) {
    return std::exp(-(v - u).squaredNorm() / (2.0 * w2));
  };
  o.grad = [u, w2](const Eigen::VectorXd& v) {
    const double f = std::exp(-(v - u).squaredNorm() / (2.0 * w2));
    return ((-(v - u) / w2) * f).eval();
  };
  o.hess = [u, w2](const Eigen::VectorXd& v) {
    const int d = int(v.size());
    const Eigen::VectorXd r = v - u;
    const double f = std::exp(-r.squaredNorm() / (2.0 * w2));
    Eigen::MatrixXd h = (r * r.transpose()) / (w2 * w2);
    h -= Eigen::MatrixXd::Identity(d, d) / w2;
    return (h * f).eval();
  };
  return o;
}

namespace {
double monomial(const Eigen::VectorXd& v, const std::vector<int>& alpha) {
  double m = 1.0;
  for (std::size_t a = 0; a < alpha.size(); ++a)
    for (int k = 0; k < alpha[a]; ++k) m *= v(int(a));
  return m;
}
// d(monomial)/dv_a
double monomial_d1(const Eigen::VectorXd& v, std::vector<int> alpha, int a) {
  if (alpha[a] == 0) return 0.0;
  const double c = alpha[a];
  alpha[a] -= 1;
  return c * monomial(v, alpha);
}
double monomial_d2(const Eigen::VectorXd& v, std::vector<int> alpha, int a, int b) {
  if (alpha[a] == 0) return 0.0;
  const double c = alpha[a];
  alpha[a] -= 1;
  if (alpha[b] == 0) return 0.0;
  const double c2 = alpha[b];
  alpha[b] -= 1;
  return c * c2 * monomial(v, alpha);
}
}  // namespace

Observable damped_monomial(const std::vector<int>& alpha) {
  Observable o;
  o.name = "damped";
  for (std::size_t a = 0; a < alpha.size(); ++a)
    for (int k = 0; k < alpha[a]; ++k) o.name += "*v" + std::to_string(a + 1);
  const std::vector<int> al = alpha;
  // g(v) = exp(-|v|^2/4); grad g = -(v/2) g; hess g = (-I/2 + v v^T/4) g.
  o.value = [al](const Eigen::VectorXd& v) {
    return monomial(v, al) * std::exp(-v.squaredNorm() / 4.0);
  };
  o.grad = [al](const Eigen::VectorXd& v) {
    const int d = int(v.size());
    const double g = std::exp(-v.squaredNorm() / 4.0);
    const double m = monomial(v, al);
    Eigen::VectorXd out(d);
    for (int a = 0; a < d; ++a) out(a) = (monomial_d1(v, al, a) - m * v(a) / 2.0) * g;
    return out;
  };
  o.hess = [al](const Eigen::VectorXd& v) {
    const int d = int(v.size());
    const double g = std::exp(-v.squaredNorm() / 4.0);
    const double m = monomial(v, al);
    Eigen::MatrixXd out(d, d);
    for (int a = 0; a < d; ++a) {
      const double ma = monomial_d1(v, al, a);
      for (int b = 0; b < d; ++b) {
        const double mb = monomial_d1(v, al, b);
        double h = monomial_d2(v, al, a, b);
        h += -ma * v(b) / 2.0 - mb * v(a) / 2.0;
        h += m * (v(a) * v(b) / 4.0 - (a == b ? 0.5 : 0.0));
        out(a, b) = h * g;
      }
    }
    return out;
  };
  return o;
}

Observable quadratic_monomial(int axis1, int axis2, int d) {
  Observable o;
  o.name = "v" + std::to_string(axis1 + 1) + "*v" + std::to_string(axis2 + 1);
  o.value = [axis1, axis2](const Eigen::VectorXd& v) { return v(axis1) * v(axis2); };
  o.grad = [axis1, axis2, d](const Eigen::VectorXd& v) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    g(axis1) += v(axis2);
    g(axis2) += v(axis1);
    return g;
  };
  o.hess = [axis1, axis2, d](const Eigen::VectorXd&) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    h(axis1, axis2) += 1.0;
    h(axis2, axis1) += 1.0;
    return h;
  };
  return o;
}

}  // namespace landau
