// Polynomial functionals of empirical measures, the projected N-particle
// generator acting on them in closed form, the limit generator via exact
// collision brackets, and the O(1/N) gap between the two.
//
// For Phi(f) = prod_j <f, phi_j> and the empirical projection
// V -> Phi(mu_V), derivatives expand through the product rule into 1/N
// single-particle terms plus 1/N^2 cross terms; the generator contraction of
// those terms is evaluated analytically (finite differences are kept to the
// tests as oracles, since the 1/N^2 terms that drive the gap drown in FD
// noise at large N).

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "landau/model.hpp"
#include "landau/observables.hpp"
#include "landau/test_functions.hpp"

namespace landau {

struct PolynomialFunctional {
  std::vector<Observable> factors;  // Phi(f) = prod_j <f, factors[j]>

  int order() const { return int(factors.size()); }
};

// Phi(f) = prod_j <f, phi_j>.
double eval_R(const PolynomialFunctional& Phi, const EmpiricalMeasure& f);

// Gateaux derivative DPhi[f] as a one-particle observable:
// v -> sum_j (prod_{k != j} <f, phi_k>) phi_j(v), with inherited grad/hess.
Observable dR(const PolynomialFunctional& Phi, const EmpiricalMeasure& f);

// G^N acting on V -> Phi(mu_V), closed form.
double apply_GN_projected(const PolynomialFunctional& Phi, const ParticleState& state,
                          const ModelParams& params);

// Limit generator: <DPhi[f], Q(f)> = collision_bracket(f, dR(Phi, f)).
double apply_Ginf(const PolynomialFunctional& Phi, const EmpiricalMeasure& f,
                  const ModelParams& params);

struct ConsistencyGap {
  double raw = 0;          // |apply_GN_projected - apply_Ginf(mu_V)|
  double normalized6 = 0;  // raw / ((1/N) sum <v_i>^6)   (production norm)
  double normalized4 = 0;  // raw / ((1/N) sum <v_i>^4)   (diagnostic norm)
};

ConsistencyGap consistency_gap(const PolynomialFunctional& Phi, const ParticleState& state,
                               const ModelParams& params);

struct ConsistencySweepRow {
  int n = 0;
  double gap_median = 0;  // normalized6 median over sampled states
  double gap_max = 0;
  double slope_running = 0;  // log-log fit over rows up to this one
  double gap_median4 = 0;    // diagnostic <v>^4 normalization
};

struct ConsistencySweep {
  std::vector<ConsistencySweepRow> rows;
  double slope = 0;
  bool exact_zero = false;  // all gaps at rounding level (conserved Phi)
};

// Samples `samples_per_n` energy-e0 zero-momentum configurations per N and
// fits log(gap_median) against log(N).
ConsistencySweep consistency_sweep(const PolynomialFunctional& Phi, const std::vector<int>& n_list,
                                   double e0, int samples_per_n, std::uint64_t seed,
                                   const ModelParams& params);

// Non-conservative generator variant: the pair generator with the mixed
// particle Hessian blocks dropped,
//   (1/N) sum_{i<j} [ 2 b(z_ij).(grad_i - grad_j)
//                     + a(z_ij):(hess_ii + hess_jj) ].
// It still kills sum_i |v_i|^2 but not general psi(|V|^2); the tests exhibit
// a quadratic psi with nonzero image.
double generator_g2(const TestFunction& phi, const ParticleState& state,
                    const ModelParams& params);

}  // namespace landau
