#pragma once

#include <string>

#include "cppc/conic_program.hpp"

namespace cppc {

struct SolveOptions {
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  double tol_gap = 1e-6;
  int max_iters = 100000;
  bool scaling = true;
  double rho = 1.0;
  double alpha = 1.6;  // over-relaxation
  int check_every = 10;
  bool adaptive_rho = true;
};

struct SolveResult {
  enum class Status { Optimal, Infeasible, Unbounded, MaxIters };
  Status status = Status::MaxIters;
  Vector values;  // flat variable vector, see ConicProgram
  double objective = 0.0;
  // Relative residuals, each normalized by the scale of the quantities
  // it compares.
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string message;
};

const char* to_string(SolveResult::Status s);

/// Consensus ADMM. The variable vector is split against one copy per cone
/// (PSD copy and nonnegative copy of each block, nonnegative scalars, and a
/// free copy for anything left over); the affine equalities are enforced
/// exactly in every primal update through a cached pseudo-inverse.
///
/// Only an inconsistent affine system is reported as Infeasible; all other
/// failures end as MaxIters with the best iterate.
SolveResult solve(const ConicProgram& p, const SolveOptions& opts = {});

}  // namespace cppc
