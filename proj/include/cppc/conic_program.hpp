#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cppc/linalg.hpp"
#include "cppc/matrix.hpp"

namespace cppc {

/// Sparse linear functional over the flat variable vector of a ConicProgram.
/// A block entry (i, j) with i != j is one variable holding the common value
/// of X_ij and X_ji.
struct LinearForm {
  std::vector<std::pair<std::size_t, double>> terms;

  void add(std::size_t var, double coef) { terms.emplace_back(var, coef); }
  double eval(const Vector& v) const;
};

struct BlockSpec {
  std::size_t order = 1;
  bool psd = true;
  bool nonneg = true;
  /// Coordinates that are sign constrained; entry (i, j) is kept nonnegative
  /// iff both i and j are. Empty means all coordinates.
  std::vector<bool> sign_mask;

  bool entry_nonneg(std::size_t i, std::size_t j) const;
};

struct ScalarSpec {
  bool nonneg = true;
};

/// min c^T v  s.t.  A v = b, every block PSD and/or entrywise nonnegative,
/// sign constraints on scalars.
class ConicProgram {
 public:
  std::size_t add_block(BlockSpec spec);
  std::size_t add_scalar(bool nonneg);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t num_scalars() const { return scalars_.size(); }
  const BlockSpec& block(std::size_t b) const { return blocks_.at(b); }
  const ScalarSpec& scalar(std::size_t s) const { return scalars_.at(s); }

  /// Flat index of block entry (i, j); symmetric in i and j.
  std::size_t entry_var(std::size_t b, std::size_t i, std::size_t j) const;
  std::size_t scalar_var(std::size_t s) const { return scalar_offset_.at(s); }
  std::size_t block_offset(std::size_t b) const { return block_offset_.at(b); }

  /// Adds C . X_b to `form` (off-diagonal coefficients counted twice).
  void add_frobenius(LinearForm& form, std::size_t b, const Matrix& c) const;

  LinearForm& objective() { return objective_; }
  const LinearForm& objective() const { return objective_; }
  double objective_constant = 0.0;

  void add_equality(LinearForm form, double rhs);
  std::size_t num_equalities() const { return eq_rhs_.size(); }
  const LinearForm& equality(std::size_t k) const { return eq_forms_.at(k); }
  double equality_rhs(std::size_t k) const { return eq_rhs_.at(k); }

  /// Dense objective vector and constraint matrix.
  Vector objective_vector() const;
  Matrix equality_matrix() const;
  Vector equality_vector() const;

  SymMatrix block_value(const Vector& v, std::size_t b) const;
  double scalar_value(const Vector& v, std::size_t s) const { return v(static_cast<Eigen::Index>(scalar_var(s))); }
  /// Objective including the constant term.
  double objective_value(const Vector& v) const;

  /// Throws std::invalid_argument for an empty or non-finite program.
  void validate() const;

 private:
  std::vector<BlockSpec> blocks_;
  std::vector<std::size_t> block_offset_;
  std::vector<ScalarSpec> scalars_;
  std::vector<std::size_t> scalar_offset_;
  std::size_t num_vars_ = 0;
  LinearForm objective_;
  std::vector<LinearForm> eq_forms_;
  std::vector<double> eq_rhs_;
};

struct KktResiduals {
  double equality = 0.0;         // max |a_k^T v - b_k|
  double cone_violation = 0.0;   // worst negative eigenvalue, entry or scalar
  double objective = 0.0;
};

/// Direct evaluation at `v`; no iteration.
KktResiduals kkt_residuals(const ConicProgram& p, const Vector& v);

}  // namespace cppc
