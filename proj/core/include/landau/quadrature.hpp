// Gauss-Legendre quadrature rules.  Nodes/weights are computed by Newton
// iteration on the Legendre recurrence (machine precision for n <= 1024).

#pragma once

#include <vector>

namespace landau {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point rule on [a, b]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace landau
