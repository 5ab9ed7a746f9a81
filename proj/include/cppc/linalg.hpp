#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cppc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when the Jacobi sweep limit is hit before the off-diagonal mass
/// drops below the convergence threshold.
class EigenSolverError : public std::runtime_error {
 public:
  explicit EigenSolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Eigenpairs of a symmetric matrix, eigenvalues in ascending order.
/// Column k of `vectors` is the unit eigenvector for `values(k)`.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  double largest_abs() const;
};

/// Cyclic Jacobi eigensolver for dense symmetric matrices.
///
/// Only the upper triangle of `a` is read. Rotations are applied row by row
/// in a fixed sweep order, so the result is bit-for-bit deterministic. A
/// sweep is skipped for pairs whose off-diagonal entry is negligible relative
/// to both diagonal entries, which gives high relative accuracy for the
/// small eigenvalues that the kernel and rank tests depend on.
EigenDecomposition jacobi_eigen(const Matrix& a, int max_sweeps = 100);

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix via Jacobi.
/// Eigenvalues below `rel_cutoff * largest` are treated as zero.
Matrix symmetric_pinv(const Matrix& a, double rel_cutoff = 1e-12);

}  // namespace cppc
