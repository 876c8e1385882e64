#pragma once
// Minimum-norm point of the polytope
//   { v in R^d : sum v = 1, v >= 0, a^T v >= 0 for each extra row },
// solved by a dual active-set method (identity Hessian, no feasible start
// required).  Rows should be pre-scaled to max-abs 1 by the caller.

#include <vector>

namespace srn {

struct QpProblem {
    int d = 1;
    std::vector<std::vector<double>> ineq_rows; // each of length d: a^T v >= 0
};

struct QpSolution {
    std::vector<double> v;
    double kkt_residual = 0.0; // max of stationarity/feasibility/complementarity
    int iterations = 0;
    int active_count = 0;
};

QpSolution solve_simplex_qp(const QpProblem& prob);

} // namespace srn
