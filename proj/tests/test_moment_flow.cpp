// Moment-level reference dynamics: weak-form collision brackets on discrete
// measures, the closed second-moment flow, its Gaussian equilibrium, and the
// Gaussian entropy helpers.  Cross-checks run against independent routes:
// a test-local RK4 integration of the pressure ODE and Gauss-Legendre
// quadrature of the entropy integrals.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "landau/model.hpp"
#include "landau/moment_flow.hpp"
#include "landau/observables.hpp"
#include "landau/quadrature.hpp"
#include "support/test_helpers.hpp"

using namespace landau;

namespace {

// Independent route for evolve_pressure: classic RK4 on dP/dt = rhs(P).
Eigen::MatrixXd rk4_pressure(const Eigen::MatrixXd& p0, double t_end, double dt,
                             const ModelParams& params) {
  const auto rhs = [&](const Eigen::MatrixXd& p) {
    MomentState m = MomentState::from_pressure(Eigen::VectorXd::Zero(params.d), p);
    return pressure_rhs(m, params);
  };
  Eigen::MatrixXd p = p0;
  const int steps = int(std::lround(t_end / dt));
  for (int s = 0; s < steps; ++s) {
    const Eigen::MatrixXd k1 = rhs(p);
    const Eigen::MatrixXd k2 = rhs(p + 0.5 * dt * k1);
    const Eigen::MatrixXd k3 = rhs(p + 0.5 * dt * k2);
    const Eigen::MatrixXd k4 = rhs(p + dt * k3);
    p += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return p;
}

double normal_pdf(double x, double mean, double var) {
  return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2.0 * M_PI * var);
}

// Random symmetric positive-definite pressure tensor with the given trace.
Eigen::MatrixXd random_pressure(int d, std::uint64_t seed, double trace) {
  const Eigen::MatrixXd a = testutil::random_cloud(d, d, seed, 1.0);
  Eigen::MatrixXd p = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
  return p * (trace / p.trace());
}

// Discrete measure with positive normalized weights, translated so the
// weighted mean vanishes (the convention the moment flow assumes).
EmpiricalMeasure centered_measure(int d, int n, std::uint64_t seed) {
  EmpiricalMeasure f;
  f.atoms = testutil::random_cloud(d, n, seed, 1.3);
  SequentialRng rng(seed, 0x7717);
  f.weights.resize(n);
  for (int i = 0; i < n; ++i) f.weights[i] = 0.1 + rng.uniform();
  f.weights /= f.weights.sum();
  const Eigen::VectorXd mean = f.atoms * f.weights;
  f.atoms.colwise() -= mean;
  return f;
}

Eigen::MatrixXd weighted_pressure(const EmpiricalMeasure& f) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(f.atoms.rows(), f.atoms.rows());
  for (int i = 0; i < f.n(); ++i)
    p += f.weights[i] * f.atoms.col(i) * f.atoms.col(i).transpose();
  return 0.5 * (p + p.transpose()).eval();
}

}  // namespace

TEST_CASE("MomentState: from_pressure and validation") {
  Eigen::MatrixXd p(3, 3);
  p << 2.0, 0.3, 0.0, 0.3, 0.5, -0.1, 0.0, -0.1, 0.5;
  const MomentState m = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p);
  CHECK(m.energy == p.trace());
  CHECK(testutil::max_abs(m.pressure - p) == 0.0);
  CHECK_NOTHROW(m.validate());

  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(MomentState::from_pressure(Eigen::VectorXd::Zero(2), p),
                    std::invalid_argument);
  }
  SUBCASE("asymmetric pressure") {
    Eigen::MatrixXd bad = p;
    bad(0, 1) += 1e-3;
    CHECK_THROWS_AS(MomentState::from_pressure(Eigen::VectorXd::Zero(3), bad),
                    std::invalid_argument);
  }
  SUBCASE("indefinite pressure") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(2, 2) = -0.5;
    CHECK_THROWS_AS(MomentState::from_pressure(Eigen::VectorXd::Zero(3), bad),
                    std::invalid_argument);
  }
  SUBCASE("energy out of sync with trace") {
    MomentState bad = m;
    bad.energy += 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("empirical_moments: hand-computed two-point cloud") {
  Eigen::MatrixXd cloud(2, 2);
  cloud.col(0) << 1.0, 2.0;
  cloud.col(1) << 3.0, -1.0;
  const MomentState m = empirical_moments(cloud);
  CHECK(m.mean[0] == 2.0);
  CHECK(m.mean[1] == 0.5);
  Eigen::MatrixXd expect(2, 2);
  expect << 5.0, -0.5, -0.5, 2.5;  // raw second moment (about the origin)
  CHECK(testutil::max_abs(m.pressure - expect) == 0.0);
  CHECK(m.energy == 7.5);
  CHECK_THROWS_AS(empirical_moments(Eigen::MatrixXd(3, 0)), std::invalid_argument);
}

TEST_CASE("collision_bracket: conserved observables annihilate") {
  const ModelParams params{3, 1.4, 3.0};
  const EmpiricalMeasure f = centered_measure(3, 8, 99);
  double scale = 0.0;
  for (int i = 0; i < f.n(); ++i) scale = std::max(scale, f.atoms.col(i).squaredNorm());
  for (int axis = 0; axis < 3; ++axis)
    CHECK(std::abs(collision_bracket(f, coordinate(axis, 3), params)) <= 1e-12 * scale);
  CHECK(std::abs(collision_bracket(f, squared_norm(3), params)) <= 1e-12 * scale * scale);
  CHECK(std::abs(collision_bracket(f, constant_one(3), params)) == 0.0);
}

TEST_CASE("collision_bracket: single atom is collisionless") {
  EmpiricalMeasure f;
  f.atoms = Eigen::MatrixXd::Zero(3, 1);
  f.atoms(0, 0) = 2.0;
  f.weights = Eigen::VectorXd::Ones(1);
  CHECK(collision_bracket(f, squared_norm(3), ModelParams{3, 1.0, 4.0}) == 0.0);
}

TEST_CASE("collision_bracket: symmetric two-atom state, hand values") {
  // f = (delta_{e1} + delta_{-e1}) / 2; E = 1, P = e1 e1^T.  The quadratic
  // moment identity gives d<v_a v_b> / dt = 4 Lambda (E I - 3 P)_ab,
  // i.e. diag(-8, 4, 4) here.
  EmpiricalMeasure f;
  f.atoms = Eigen::MatrixXd::Zero(3, 2);
  f.atoms(0, 0) = 1.0;
  f.atoms(0, 1) = -1.0;
  f.weights = Eigen::VectorXd::Constant(2, 0.5);
  const ModelParams params{3, 1.0, 1.0};
  CHECK(collision_bracket(f, quadratic_monomial(1, 1, 3), params) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(collision_bracket(f, quadratic_monomial(2, 2, 3), params) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(collision_bracket(f, quadratic_monomial(0, 0, 3), params) == doctest::Approx(-8.0).epsilon(1e-14));
  CHECK(collision_bracket(f, quadratic_monomial(0, 1, 3), params) == 0.0);
}

TEST_CASE("collision_bracket matches the closed pressure flow on quadratics") {
  // Independent routes: the weak-form pair sum versus the algebraic
  // right-hand side 4 Lambda (E I - d P); they must agree entrywise on every
  // quadratic monomial for zero-mean measures.
  const ModelParams params{3, 0.8, 0.0};
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    const EmpiricalMeasure f = centered_measure(3, 7, seed);
    const Eigen::MatrixXd p = weighted_pressure(f);
    const MomentState m = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p);
    const Eigen::MatrixXd rhs = pressure_rhs(m, params);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double lhs = collision_bracket(f, quadratic_monomial(a, b, 3), params);
        CHECK(std::abs(lhs - rhs(a, b)) <= 1e-10 * (1.0 + std::abs(rhs(a, b))));
      }
  }
}

TEST_CASE("collision_bracket is linear in the collision rate") {
  const EmpiricalMeasure f = centered_measure(3, 6, 31);
  const Observable phi = gaussian_bump(Eigen::VectorXd::Zero(3), 1.5);
  const double b1 = collision_bracket(f, phi, ModelParams{3, 1.0, 0.0});
  const double b2 = collision_bracket(f, phi, ModelParams{3, 2.0, 0.0});
  CHECK(b2 == doctest::Approx(2.0 * b1).epsilon(1e-14));
}

TEST_CASE("pressure_rhs: frozen anisotropic value and structure") {
  const ModelParams params{3, 1.0, 3.0};
  Eigen::MatrixXd p0 = Eigen::MatrixXd::Zero(3, 3);
  p0.diagonal() << 2.0, 0.5, 0.5;
  const MomentState m = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p0);
  const Eigen::MatrixXd rhs = pressure_rhs(m, params);
  CHECK(rhs(0, 0) == -12.0);
  CHECK(rhs(1, 1) == 6.0);
  CHECK(rhs(2, 2) == 6.0);
  CHECK(testutil::max_abs(rhs - rhs.diagonal().asDiagonal().toDenseMatrix()) == 0.0);

  SUBCASE("trace-free for arbitrary states") {
    const Eigen::MatrixXd p = random_pressure(3, 5, 4.2);
    const MomentState ms = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p);
    CHECK(std::abs(pressure_rhs(ms, params).trace()) <= 1e-12 * p.trace());
  }
  SUBCASE("isotropic state is stationary") {
    const MomentState ms =
        MomentState::from_pressure(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3));
    CHECK(testutil::max_abs(pressure_rhs(ms, params)) == 0.0);
  }
  SUBCASE("zero-mean convention is enforced") {
    MomentState ms = m;
    ms.mean[1] = 0.2;
    CHECK_THROWS_AS(pressure_rhs(ms, params), std::invalid_argument);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(pressure_rhs(m, ModelParams{2, 1.0, 3.0}), std::invalid_argument);
  }
}

TEST_CASE("evolve_pressure: frozen relaxation of diag(2, 1/2, 1/2)") {
  const ModelParams params{3, 1.0, 3.0};
  Eigen::MatrixXd p0 = Eigen::MatrixXd::Zero(3, 3);
  p0.diagonal() << 2.0, 0.5, 0.5;
  const MomentState m0 = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p0);
  const MomentState m1 = evolve_pressure(m0, 0.1, params);
  // Closed form: P(t) = (E/d) I + e^{-4 Lambda d t} (P0 - (E/d) I).
  const double decay = std::exp(-1.2);
  CHECK(m1.pressure(0, 0) == doctest::Approx(1.0 + decay).epsilon(1e-13));
  CHECK(m1.pressure(1, 1) == doctest::Approx(1.0 - 0.5 * decay).epsilon(1e-13));
  CHECK(m1.pressure(2, 2) == doctest::Approx(1.0 - 0.5 * decay).epsilon(1e-13));
  CHECK(testutil::max_abs(m1.pressure - m1.pressure.diagonal().asDiagonal().toDenseMatrix()) ==
        0.0);
  CHECK(m1.energy == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("evolve_pressure agrees with RK4 integration of the flow") {
  const ModelParams params{3, 0.7, 4.2};
  const Eigen::MatrixXd p0 = random_pressure(3, 17, 4.2);
  const MomentState m0 = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p0);
  const Eigen::MatrixXd numeric = rk4_pressure(p0, 0.3, 5e-4, params);
  const MomentState closed = evolve_pressure(m0, 0.3, params);
  CHECK(testutil::max_abs(closed.pressure - numeric) <= 1e-10);
}

TEST_CASE("evolve_pressure: invariants along the flow") {
  const ModelParams params{3, 1.0, 5.0};
  const Eigen::MatrixXd p0 = random_pressure(3, 23, 5.0);
  const MomentState m0 = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p0);
  const Eigen::MatrixXd eq = (p0.trace() / 3.0) * Eigen::MatrixXd::Identity(3, 3);

  SUBCASE("t = 0 returns the initial tensor") {
    CHECK(testutil::max_abs(evolve_pressure(m0, 0.0, params).pressure - p0) <= 1e-15 * p0.trace());
  }
  SUBCASE("trace is conserved and distance to equilibrium decays") {
    double prev = (p0 - eq).norm();
    for (int k = 1; k <= 10; ++k) {
      const MomentState mt = evolve_pressure(m0, 0.1 * k, params);
      CHECK(std::abs(mt.energy - m0.energy) <= 1e-13 * m0.energy);
      const double dist = (mt.pressure - eq).norm();
      CHECK(dist < prev);
      prev = dist;
    }
  }
  SUBCASE("off-diagonal entries decay by the exact exponential factor") {
    const double t = 0.37;
    const double decay = std::exp(-4.0 * params.lambda * params.d * t);
    const MomentState mt = evolve_pressure(m0, t, params);
    CHECK(mt.pressure(0, 1) == doctest::Approx(decay * p0(0, 1)).epsilon(1e-13));
    CHECK(mt.pressure(0, 2) == doctest::Approx(decay * p0(0, 2)).epsilon(1e-13));
  }
  SUBCASE("long-time limit is the isotropic tensor") {
    CHECK(testutil::max_abs(evolve_pressure(m0, 500.0, params).pressure - eq) <=
          1e-14 * p0.trace());
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(evolve_pressure(m0, -0.1, params), std::invalid_argument);
    MomentState shifted = m0;
    shifted.mean[0] = 0.5;
    CHECK_THROWS_AS(evolve_pressure(shifted, 0.1, params), std::invalid_argument);
    CHECK_THROWS_AS(evolve_pressure(m0, 0.1, ModelParams{2, 1.0, 5.0}), std::invalid_argument);
  }
}

TEST_CASE("equilibrium_gaussian: isotropic with matched energy") {
  const GaussianState g = equilibrium_gaussian(ModelParams{3, 1.0, 2.1});
  CHECK(g.mean.norm() == 0.0);
  CHECK(testutil::max_abs(g.covariance - (2.1 / 3.0) * Eigen::MatrixXd::Identity(3, 3)) == 0.0);
  CHECK_THROWS_AS(equilibrium_gaussian(ModelParams{3, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("gaussian_relative_entropy: closed forms and quadrature") {
  SUBCASE("identical distributions have zero divergence") {
    GaussianState f;
    f.mean = testutil::random_vector(3, 4, 0.8);
    const Eigen::MatrixXd a = testutil::random_cloud(3, 3, 5, 1.0);
    f.covariance = a * a.transpose() + 0.2 * Eigen::MatrixXd::Identity(3, 3);
    CHECK(std::abs(gaussian_relative_entropy(f, f)) <= 1e-14);
  }
  SUBCASE("one-dimensional variance-2 example") {
    GaussianState f, gamma;
    f.mean = Eigen::VectorXd::Zero(1);
    f.covariance = Eigen::MatrixXd::Constant(1, 1, 2.0);
    gamma.mean = Eigen::VectorXd::Zero(1);
    gamma.covariance = Eigen::MatrixXd::Identity(1, 1);
    const double expect = 0.5 * (2.0 - 1.0 - std::log(2.0));
    CHECK(gaussian_relative_entropy(f, gamma) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("mean shift against the standard Gaussian") {
    GaussianState f, gamma;
    f.mean = Eigen::VectorXd::Zero(3);
    f.mean[0] = 0.8;
    f.covariance = Eigen::MatrixXd::Identity(3, 3);
    gamma.mean = Eigen::VectorXd::Zero(3);
    gamma.covariance = Eigen::MatrixXd::Identity(3, 3);
    CHECK(gaussian_relative_entropy(f, gamma) == doctest::Approx(0.5 * 0.64).epsilon(1e-14));
  }
  SUBCASE("one-dimensional quadrature of f log(f/gamma)") {
    const double mf = 0.3, vf = 1.7;
    GaussianState f, gamma;
    f.mean = Eigen::VectorXd::Constant(1, mf);
    f.covariance = Eigen::MatrixXd::Constant(1, 1, vf);
    gamma.mean = Eigen::VectorXd::Zero(1);
    gamma.covariance = Eigen::MatrixXd::Identity(1, 1);
    const QuadratureRule rule = gauss_legendre(400, -15.0, 15.0);
    double integral = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double x = rule.nodes[k];
      const double fx = normal_pdf(x, mf, vf);
      integral += rule.weights[k] * fx * std::log(fx / normal_pdf(x, 0.0, 1.0));
    }
    CHECK(gaussian_relative_entropy(f, gamma) == doctest::Approx(integral).epsilon(1e-10));
  }
  SUBCASE("nonnegative on random pairs") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
      GaussianState f, gamma;
      f.mean = testutil::random_vector(3, seed, 0.5);
      gamma.mean = testutil::random_vector(3, seed + 100, 0.5);
      const Eigen::MatrixXd af = testutil::random_cloud(3, 3, seed + 200, 0.9);
      const Eigen::MatrixXd ag = testutil::random_cloud(3, 3, seed + 300, 0.9);
      f.covariance = af * af.transpose() + 0.3 * Eigen::MatrixXd::Identity(3, 3);
      gamma.covariance = ag * ag.transpose() + 0.3 * Eigen::MatrixXd::Identity(3, 3);
      CHECK(gaussian_relative_entropy(f, gamma) >= 0.0);
    }
  }
  SUBCASE("argument validation") {
    GaussianState f, gamma;
    f.mean = Eigen::VectorXd::Zero(2);
    f.covariance = Eigen::MatrixXd::Identity(2, 2);
    gamma.mean = Eigen::VectorXd::Zero(3);
    gamma.covariance = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(gaussian_relative_entropy(f, gamma), std::invalid_argument);
    gamma = f;
    gamma.covariance.setZero();
    CHECK_THROWS_AS(gaussian_relative_entropy(f, gamma), std::invalid_argument);
  }
}

TEST_CASE("gaussian_entropy: closed form against quadrature") {
  SUBCASE("standard one-dimensional value") {
    GaussianState f;
    f.mean = Eigen::VectorXd::Zero(1);
    f.covariance = Eigen::MatrixXd::Identity(1, 1);
    CHECK(gaussian_entropy(f) ==
          doctest::Approx(-0.5 * std::log(2.0 * M_PI * std::exp(1.0))).epsilon(1e-15));
  }
  SUBCASE("one-dimensional quadrature of f log f") {
    GaussianState f;
    f.mean = Eigen::VectorXd::Constant(1, 0.4);
    f.covariance = Eigen::MatrixXd::Constant(1, 1, 2.3);
    const QuadratureRule rule = gauss_legendre(400, -20.0, 20.0);
    double integral = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double fx = normal_pdf(rule.nodes[k], 0.4, 2.3);
      integral += rule.weights[k] * fx * std::log(fx);
    }
    CHECK(gaussian_entropy(f) == doctest::Approx(integral).epsilon(1e-10));
  }
  SUBCASE("two-dimensional tensor quadrature") {
    GaussianState f;
    f.mean = Eigen::VectorXd::Zero(2);
    f.covariance = Eigen::MatrixXd::Identity(2, 2);
    f.covariance(1, 1) = 0.5;
    const QuadratureRule rule = gauss_legendre(200, -12.0, 12.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double fx =
            normal_pdf(rule.nodes[i], 0.0, 1.0) * normal_pdf(rule.nodes[j], 0.0, 0.5);
        integral += rule.weights[i] * rule.weights[j] * fx * std::log(fx);
      }
    CHECK(gaussian_entropy(f) == doctest::Approx(integral).epsilon(1e-9));
  }
  SUBCASE("dilation shifts by d log c") {
    GaussianState f;
    f.mean = testutil::random_vector(3, 9, 1.0);
    const Eigen::MatrixXd a = testutil::random_cloud(3, 3, 10, 1.0);
    f.covariance = a * a.transpose() + 0.2 * Eigen::MatrixXd::Identity(3, 3);
    GaussianState g = f;
    const double c = 1.7;
    g.covariance *= c * c;
    CHECK(gaussian_entropy(g) ==
          doctest::Approx(gaussian_entropy(f) - 3.0 * std::log(c)).epsilon(1e-13));
  }
  SUBCASE("relative entropy decomposes as f log f minus cross term") {
    GaussianState f, gamma;
    f.mean = Eigen::VectorXd::Zero(3);
    f.mean[0] = 0.4;
    const Eigen::MatrixXd a = testutil::random_cloud(3, 3, 11, 0.8);
    f.covariance = a * a.transpose() + 0.4 * Eigen::MatrixXd::Identity(3, 3);
    gamma.mean = Eigen::VectorXd::Zero(3);
    gamma.covariance = 1.3 * Eigen::MatrixXd::Identity(3, 3);
    // E_f[log gamma] in closed form for isotropic gamma.
    const double sg = 1.3;
    const double cross = -0.5 * (3.0 * std::log(2.0 * M_PI * sg) +
                                 (f.covariance.trace() + f.mean.squaredNorm()) / sg);
    CHECK(gaussian_relative_entropy(f, gamma) ==
          doctest::Approx(gaussian_entropy(f) - cross).epsilon(1e-12));
  }
}

TEST_CASE("Gaussian flow dissipates relative entropy and f log f") {
  const ModelParams params{3, 1.0, 3.0};
  const Eigen::MatrixXd p0 = random_pressure(3, 41, 3.0);
  const MomentState m0 = MomentState::from_pressure(Eigen::VectorXd::Zero(3), p0);
  const GaussianState eq = equilibrium_gaussian(params);
  double prev_kl = std::numeric_limits<double>::infinity();
  double prev_h = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 20; ++k) {
    const MomentState mt = evolve_pressure(m0, 0.05 * k, params);
    GaussianState f;
    f.mean = mt.mean;
    f.covariance = mt.pressure;
    const double kl = gaussian_relative_entropy(f, eq);
    const double h = gaussian_entropy(f);
    CHECK(kl <= prev_kl + 1e-14);
    CHECK(h <= prev_h + 1e-14);
    prev_kl = kl;
    prev_h = h;
  }
}
