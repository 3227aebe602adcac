// Polynomial functionals of empirical measures and the generator gap that
// drives the 1/N consistency estimate.  The projected generator's closed-form
// product-rule expansion is checked against (a) a finite-difference
// evaluation of the pair generator on the composite map V -> Phi(mu_V) and
// (b) the one-particle generator applied to the equivalent N-particle test
// function; the limit generator is checked against its factor-linearity
// decomposition into collision brackets.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "landau/consistency.hpp"
#include "landau/landau_sde.hpp"
#include "landau/model.hpp"
#include "landau/moment_flow.hpp"
#include "landau/observables.hpp"
#include "landau/test_functions.hpp"
#include "support/test_helpers.hpp"

using namespace landau;

namespace {

// Scalar configuration map V -> Phi(mu_V), wrapped so the finite-difference
// helpers (which only touch .value) can drive it.
TestFunction projected_value(const PolynomialFunctional& Phi) {
  TestFunction f;
  f.name = "projected";
  f.value = [Phi](const Eigen::MatrixXd& V) {
    ParticleState state;
    state.v = V;
    return eval_R(Phi, empirical(state));
  };
  return f;
}

// Independent route for apply_GN_projected: the pair generator evaluated with
// finite differences of the composite map (no product rule).
double fd_generator(const PolynomialFunctional& Phi, const ParticleState& state,
                    const ModelParams& params, double h) {
  const TestFunction f = projected_value(Phi);
  const int n = state.n();
  double acc = 0;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      const Eigen::VectorXd z = state.v.col(i) - state.v.col(k);
      const Eigen::MatrixXd az = coeff_a(z, params);
      const Eigen::VectorXd bz = coeff_b(z, params);
      const Eigen::VectorXd gi = testutil::fd_particle_grad(f, state.v, i, h);
      const Eigen::VectorXd gk = testutil::fd_particle_grad(f, state.v, k, h);
      const Eigen::MatrixXd hcombo = testutil::fd_particle_hess(f, state.v, i, i, h) +
                                     testutil::fd_particle_hess(f, state.v, k, k, h) -
                                     testutil::fd_particle_hess(f, state.v, i, k, h) -
                                     testutil::fd_particle_hess(f, state.v, k, i, h);
      acc += 2.0 * bz.dot(gi - gk) + az.cwiseProduct(hcombo).sum();
    }
  return acc / n;
}

EmpiricalMeasure weighted_measure(int d, int n, std::uint64_t seed) {
  EmpiricalMeasure f;
  f.atoms = testutil::random_cloud(d, n, seed, 1.2);
  SequentialRng rng(seed, 0x1D17);
  f.weights.resize(n);
  for (int i = 0; i < n; ++i) f.weights[i] = 0.2 + rng.uniform();
  f.weights /= f.weights.sum();
  return f;
}

Observable bump_at(double cx, double width) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
  c[0] = cx;
  return gaussian_bump(c, width);
}

}  // namespace

TEST_CASE("eval_R: products of measure averages") {
  EmpiricalMeasure f;
  f.atoms.resize(3, 2);
  f.atoms.col(0) << 1.0, -1.0, 0.5;
  f.atoms.col(1) << 0.0, 2.0, 1.0;
  f.weights.resize(2);
  f.weights << 0.3, 0.7;
  const PolynomialFunctional Phi{{coordinate(0, 3), squared_norm(3)}};
  const double s0 = 0.3 * 1.0 + 0.7 * 0.0;
  const double s1 = 0.3 * 2.25 + 0.7 * 5.0;
  CHECK(eval_R(Phi, f) == s0 * s1);
  CHECK(eval_R(PolynomialFunctional{{constant_one(3)}}, f) == 1.0);
}

TEST_CASE("dR: derivative observable of a polynomial functional") {
  const EmpiricalMeasure f = weighted_measure(3, 5, 42);

  SUBCASE("single factor reproduces the factor itself") {
    const Observable phi = bump_at(0.4, 1.1);
    const Observable d1 = dR(PolynomialFunctional{{phi}}, f);
    const Eigen::VectorXd v = testutil::random_vector(3, 7, 1.0);
    CHECK(d1.value(v) == phi.value(v));
    CHECK(testutil::max_abs(d1.grad(v) - phi.grad(v)) == 0.0);
    CHECK(testutil::max_abs(d1.hess(v) - phi.hess(v)) == 0.0);
  }
  SUBCASE("two factors weight each factor by the other's average") {
    const Observable p1 = bump_at(0.0, 1.0), p2 = squared_norm(3);
    const PolynomialFunctional Phi{{p1, p2}};
    double s1 = 0, s2 = 0;
    for (int p = 0; p < f.n(); ++p) {
      s1 += f.weights[p] * p1.value(f.atoms.col(p));
      s2 += f.weights[p] * p2.value(f.atoms.col(p));
    }
    const Observable d2 = dR(Phi, f);
    const Eigen::VectorXd v = testutil::random_vector(3, 8, 1.0);
    CHECK(d2.value(v) ==
          doctest::Approx(s2 * p1.value(v) + s1 * p2.value(v)).epsilon(1e-14));
    CHECK(testutil::max_abs(d2.grad(v) - (s2 * p1.grad(v) + s1 * p2.grad(v))) <= 1e-14);
    CHECK(testutil::max_abs(d2.hess(v) - d2.hess(v).transpose()) <= 1e-14);
    // The closures carry honest derivatives of the value.
    CHECK(testutil::max_abs(d2.grad(v) - testutil::fd_grad(d2, v)) <= 1e-6);
  }
  SUBCASE("matches the mixture derivative of the functional") {
    // d/dt Phi((1-t) f + t delta_v) at t=0 equals dR(v) minus l * Phi(f)
    // (the affine offset dropped by the observable normalization).
    const PolynomialFunctional Phi{{bump_at(0.2, 1.3), squared_norm(3)}};
    const Eigen::VectorXd v = testutil::random_vector(3, 9, 0.8);
    const double t = 1e-5;
    const auto mix = [&](double tt) {
      EmpiricalMeasure g;
      g.atoms.resize(3, f.n() + 1);
      g.atoms.leftCols(f.n()) = f.atoms;
      g.atoms.col(f.n()) = v;
      g.weights.resize(f.n() + 1);
      g.weights.head(f.n()) = (1.0 - tt) * f.weights;
      g.weights[f.n()] = tt;
      return eval_R(Phi, g);
    };
    const double fd = (mix(t) - mix(-t)) / (2.0 * t);
    const double expect = dR(Phi, f).value(v) - 2.0 * eval_R(Phi, f);
    CHECK(fd == doctest::Approx(expect).epsilon(1e-7));
  }
  SUBCASE("empty functional is rejected") {
    CHECK_THROWS_AS(dR(PolynomialFunctional{}, f), std::invalid_argument);
  }
}

TEST_CASE("apply_GN_projected: conserved functionals vanish identically") {
  const ParticleState state = testutil::random_state(3, 8, 13, 1.1);
  const ModelParams params{3, 1.0, 0.0};
  const double scale = state.v.squaredNorm();

  CHECK(apply_GN_projected(PolynomialFunctional{{constant_one(3)}}, state, params) == 0.0);
  CHECK(apply_GN_projected(PolynomialFunctional{{constant_one(3), constant_one(3)}}, state,
                           params) == 0.0);
  for (int axis = 0; axis < 3; ++axis)
    CHECK(apply_GN_projected(PolynomialFunctional{{coordinate(axis, 3)}}, state, params) == 0.0);
  // Product of two momentum averages: every per-particle derivative is
  // particle-independent, so all pair differences cancel exactly.
  CHECK(apply_GN_projected(PolynomialFunctional{{coordinate(0, 3), coordinate(1, 3)}}, state,
                           params) == 0.0);
  CHECK(std::abs(apply_GN_projected(PolynomialFunctional{{squared_norm(3)}}, state, params)) <=
        1e-12 * scale);
  CHECK(std::abs(apply_GN_projected(PolynomialFunctional{{coordinate(0, 3), squared_norm(3)}},
                                    state, params)) <= 1e-12 * (1.0 + scale * scale));
  CHECK_THROWS_AS(apply_GN_projected(PolynomialFunctional{}, state, params),
                  std::invalid_argument);
}

TEST_CASE("apply_GN_projected agrees with finite differences of the composite map") {
  const ModelParams params{3, 1.3, 0.0};
  SUBCASE("two bump factors") {
    const ParticleState state = testutil::random_state(3, 6, 21, 1.1);
    const PolynomialFunctional Phi{{bump_at(0.3, 1.2), bump_at(-0.5, 0.9)}};
    const double exact = apply_GN_projected(Phi, state, params);
    const double fd = fd_generator(Phi, state, params, 1e-3);
    CHECK(std::abs(exact - fd) <= 2e-6 * (1.0 + std::abs(exact)));
  }
  SUBCASE("three mixed factors") {
    const ParticleState state = testutil::random_state(3, 5, 22, 0.9);
    const PolynomialFunctional Phi{{bump_at(0.0, 1.0), squared_norm(3), bump_at(0.4, 1.4)}};
    const double exact = apply_GN_projected(Phi, state, params);
    const double fd = fd_generator(Phi, state, params, 1e-3);
    CHECK(std::abs(exact - fd) <= 2e-6 * (1.0 + std::abs(exact)));
  }
}

TEST_CASE("apply_GN_projected matches the particle generator on mean products") {
  // Phi(mu_V) for two factors is exactly the mean_product test function, so
  // the closed-form expansion must agree with the generic generator.
  const ParticleState state = testutil::random_state(3, 7, 31, 1.0);
  const ModelParams params{3, 0.8, 0.0};
  const Observable f = bump_at(0.2, 1.1), g = squared_norm(3);
  const double via_functional =
      apply_GN_projected(PolynomialFunctional{{f, g}}, state, params);
  const double via_testfunction = generator_landau(mean_product(f, g), state, params);
  CHECK(std::abs(via_functional - via_testfunction) <=
        1e-12 * (1.0 + std::abs(via_testfunction)));
}

TEST_CASE("apply_GN_projected: relabeling invariance and rate linearity") {
  const ParticleState state = testutil::random_state(3, 6, 41, 1.0);
  const PolynomialFunctional Phi{{bump_at(0.1, 1.0), bump_at(-0.3, 1.2)}};
  const ModelParams params{3, 1.0, 0.0};
  const double base = apply_GN_projected(Phi, state, params);

  ParticleState relabeled;
  relabeled.v.resize(3, 6);
  for (int i = 0; i < 6; ++i) relabeled.v.col(i) = state.v.col((i + 2) % 6);
  CHECK(std::abs(apply_GN_projected(Phi, relabeled, params) - base) <=
        1e-12 * (1.0 + std::abs(base)));

  CHECK(apply_GN_projected(Phi, state, ModelParams{3, 2.0, 0.0}) ==
        doctest::Approx(2.0 * base).epsilon(1e-13));
}

TEST_CASE("apply_Ginf: collision bracket of the derivative observable") {
  const ModelParams params{3, 1.0, 0.0};
  SUBCASE("constants and conserved factors vanish") {
    const EmpiricalMeasure f = weighted_measure(3, 6, 51);
    CHECK(apply_Ginf(PolynomialFunctional{{constant_one(3)}}, f, params) == 0.0);
    CHECK(apply_Ginf(PolynomialFunctional{{coordinate(1, 3)}}, f, params) == 0.0);
    double scale = 0;
    for (int i = 0; i < f.n(); ++i) scale = std::max(scale, f.atoms.col(i).squaredNorm());
    CHECK(std::abs(apply_Ginf(PolynomialFunctional{{squared_norm(3)}}, f, params)) <=
          1e-12 * scale);
  }
  SUBCASE("two-atom hand value") {
    // f = (delta_{e1} + delta_{-e1})/2, Phi = <v_1^2><v_2^2>: the first
    // average is 1 and the second 0, so the image collapses to the bracket of
    // v_2^2 alone, which is 4 for this state.
    EmpiricalMeasure f;
    f.atoms = Eigen::MatrixXd::Zero(3, 2);
    f.atoms(0, 0) = 1.0;
    f.atoms(0, 1) = -1.0;
    f.weights = Eigen::VectorXd::Constant(2, 0.5);
    const PolynomialFunctional Phi{{quadratic_monomial(0, 0, 3), quadratic_monomial(1, 1, 3)}};
    CHECK(apply_Ginf(Phi, f, params) == doctest::Approx(4.0).epsilon(1e-13));
  }
  SUBCASE("factor-linearity decomposition") {
    const EmpiricalMeasure f = weighted_measure(3, 7, 61);
    const Observable p1 = bump_at(0.0, 1.0), p2 = squared_norm(3), p3 = bump_at(0.5, 0.8);
    std::vector<double> s(3, 0.0);
    const std::vector<Observable> obs = {p1, p2, p3};
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < f.n(); ++p)
        s[std::size_t(j)] += f.weights[p] * obs[std::size_t(j)].value(f.atoms.col(p));

    const double pair = apply_Ginf(PolynomialFunctional{{p1, p2}}, f, params);
    const double pair_expect =
        s[1] * collision_bracket(f, p1, params) + s[0] * collision_bracket(f, p2, params);
    CHECK(pair == doctest::Approx(pair_expect).epsilon(1e-13));

    const double triple = apply_Ginf(PolynomialFunctional{{p1, p2, p3}}, f, params);
    const double triple_expect = s[1] * s[2] * collision_bracket(f, p1, params) +
                                 s[0] * s[2] * collision_bracket(f, p2, params) +
                                 s[0] * s[1] * collision_bracket(f, p3, params);
    CHECK(triple == doctest::Approx(triple_expect).epsilon(1e-13));
  }
}

TEST_CASE("consistency_gap: structure and rate linearity") {
  const ParticleState state = testutil::random_state(3, 8, 71, 1.0);
  const PolynomialFunctional Phi{{bump_at(0.2, 1.1), bump_at(-0.4, 1.3)}};
  const ConsistencyGap g1 = consistency_gap(Phi, state, ModelParams{3, 1.0, 0.0});
  const ConsistencyGap g2 = consistency_gap(Phi, state, ModelParams{3, 2.0, 0.0});
  CHECK(g1.raw > 0.0);
  CHECK(g2.raw == doctest::Approx(2.0 * g1.raw).epsilon(1e-12));
  CHECK(g1.normalized6 == doctest::Approx(g1.raw / weight_MN(state, bracket_weight(6))).epsilon(1e-15));
  CHECK(g1.normalized4 == doctest::Approx(g1.raw / weight_MN(state, bracket_weight(4))).epsilon(1e-15));
  // The <v>^6 weight dominates the <v>^4 weight, so its normalization is the
  // smaller of the two.
  CHECK(g1.normalized6 <= g1.normalized4);

  // Conserved functionals have an exactly zero gap.
  const ConsistencyGap cg =
      consistency_gap(PolynomialFunctional{{coordinate(0, 3)}}, state, ModelParams{3, 1.0, 0.0});
  CHECK(cg.raw == 0.0);
}

TEST_CASE("consistency_sweep: 1/N decay for a smooth pair functional") {
  const PolynomialFunctional Phi{{bump_at(0.5, 1.0), bump_at(-0.5, 1.2)}};
  const ModelParams params{3, 1.0, 3.0};
  const ConsistencySweep sweep =
      consistency_sweep(Phi, {8, 16, 32, 64}, 3.0, 20, 2024, params);
  REQUIRE(sweep.rows.size() == 4);
  CHECK_FALSE(sweep.exact_zero);
  for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
    CHECK(sweep.rows[r].n == std::vector<int>({8, 16, 32, 64})[r]);
    CHECK(sweep.rows[r].gap_median > 0.0);
    CHECK(sweep.rows[r].gap_median <= sweep.rows[r].gap_max);
    CHECK(sweep.rows[r].gap_median4 > 0.0);
  }
  // Medians must decay roughly like 1/N already on this short ladder.
  CHECK(sweep.slope >= -1.2);
  CHECK(sweep.slope <= -0.85);
  CHECK(sweep.slope == sweep.rows.back().slope_running);

  SUBCASE("deterministic in the seed") {
    const ConsistencySweep again =
        consistency_sweep(Phi, {8, 16, 32, 64}, 3.0, 20, 2024, params);
    for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
      CHECK(again.rows[r].gap_median == sweep.rows[r].gap_median);
      CHECK(again.rows[r].gap_max == sweep.rows[r].gap_max);
    }
  }
}

TEST_CASE("consistency_sweep: conserved functionals flag exact zero") {
  const ModelParams params{3, 1.0, 3.0};
  const ConsistencySweep sweep = consistency_sweep(
      PolynomialFunctional{{squared_norm(3)}}, {8, 16}, 3.0, 5, 7, params);
  CHECK(sweep.exact_zero);
  CHECK(sweep.slope == 0.0);
  CHECK_THROWS_AS(consistency_sweep(PolynomialFunctional{{squared_norm(3)}}, {8}, 3.0, 5, 7, params),
                  std::invalid_argument);
  CHECK_THROWS_AS(consistency_sweep(PolynomialFunctional{{squared_norm(3)}}, {8, 16}, 3.0, 0, 7, params),
                  std::invalid_argument);
}

TEST_CASE("generator_g2: drops cross blocks but keeps diagonal conservation") {
  const ParticleState state = testutil::random_state(3, 8, 91, 1.0);
  const ModelParams params{3, 1.0, 0.0};
  const double scale = state.v.squaredNorm();

  SUBCASE("momentum and total energy are still annihilated") {
    CHECK(generator_g2(momentum_sum(0, 3), state, params) == 0.0);
    CHECK(std::abs(generator_g2(energy_sum(3), state, params)) <= 1e-12 * scale);
  }
  SUBCASE("smooth functions of the energy are not: explicit quadratic image") {
    // For psi(s) = s^2 the dropped cross blocks leave exactly
    // (8 psi'' / N) sum_{i<j} v_i . a(z_ij) v_j behind.
    const TestFunction psi = psi_of_total_energy(
        [](double s) { return s * s; }, [](double s) { return 2.0 * s; },
        [](double) { return 2.0; }, "energy_squared");
    const double g2 = generator_g2(psi, state, params);
    const int n = state.n();
    double expect = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Eigen::MatrixXd az = coeff_a(state.v.col(i) - state.v.col(j), params);
        expect += state.v.col(i).dot(az * state.v.col(j));
      }
    expect *= 16.0 / n;
    CHECK(g2 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(g2) >= 1e-3);
    // The full generator annihilates the same function.
    CHECK(std::abs(generator_landau(psi, state, params)) <= 1e-12 * scale * scale);
  }
  SUBCASE("difference from the full generator is the cross-block sum") {
    const TestFunction phi = mean_product(bump_at(0.3, 1.0), squared_norm(3));
    const int n = state.n();
    double cross = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Eigen::MatrixXd az = coeff_a(state.v.col(i) - state.v.col(j), params);
        const Eigen::MatrixXd hij = phi.hess(state.v, i, j) + phi.hess(state.v, j, i);
        cross += az.cwiseProduct(hij).sum();
      }
    cross /= n;
    const double expect = generator_landau(phi, state, params) + cross;
    CHECK(generator_g2(phi, state, params) == doctest::Approx(expect).epsilon(1e-12));
  }
}
