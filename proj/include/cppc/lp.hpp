#pragma once

#include <vector>

#include "cppc/linalg.hpp"

namespace cppc {

/// min c^T x  s.t.  A_eq x = b_eq,  A_ub x <= b_ub,  x_j >= 0 where nonneg[j].
struct LinearProgram {
  Vector c;
  Matrix a_eq;
  Vector b_eq;
  Matrix a_ub;
  Vector b_ub;
  std::vector<bool> nonneg;  // empty: all variables nonnegative
};

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };
  Status status = Status::IterationLimit;
  Vector x;
  double objective = 0.0;
};

/// Dense two-phase tableau simplex with Bland's rule. Intended for the
/// handful of variables that appear in recession-cone tests.
LpResult solve_lp(const LinearProgram& lp, double tol = 1e-10, int max_pivots = 10000);

}  // namespace cppc
