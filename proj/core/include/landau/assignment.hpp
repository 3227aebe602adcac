// Exact dense linear assignment by shortest augmenting paths with potentials
// (Jonker-Volgenant style), O(n^3).  Minimizes sum_i cost(i, perm(i)) over
// permutations.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace landau {

struct AssignmentResult {
  std::vector<int> row_to_col;  // perm: row i -> column row_to_col[i]
  double cost = 0;              // minimal total cost
};

AssignmentResult solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace landau
