#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <vector>

#include "cppc/linalg.hpp"

namespace cppc {

inline constexpr double kDefaultAgreementTol = 1e-8;

/// Dense symmetric matrix. The upper triangle of the input is authoritative;
/// the lower triangle is overwritten at construction and the value is
/// immutable afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& upper);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix zero(std::size_t order);
  static SymMatrix identity(std::size_t order);

  std::size_t order() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& dense() const { return m_; }

  /// Principal submatrix on the given index set (in the given order).
  SymMatrix principal(const std::vector<std::size_t>& idx) const;

  /// Frobenius inner product with another matrix of the same order.
  double dot(const SymMatrix& other) const;

 private:
  Matrix m_;
};

/// Arrowhead specification pattern: a shared NW block of order n1 and S arms
/// of width n2. Arm blocks are mutually unspecified.
struct ArrowheadPattern {
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  std::size_t arms = 1;

  ArrowheadPattern() = default;
  ArrowheadPattern(std::size_t n1_, std::size_t n2_, std::size_t arms_);

  std::size_t total_order() const { return n1 + arms * n2; }
  /// Arm owning global index `k`, or nullopt when `k` is in the NW block.
  std::optional<std::size_t> arm_of(std::size_t k) const;
  bool is_specified(std::size_t i, std::size_t j) const;
  /// Global indices of the fully specified block for `arm` (0-based).
  std::vector<std::size_t> block_indices(std::size_t arm) const;
  /// Number of unspecified entries in the strict upper triangle.
  std::size_t unspecified_count() const { return arms * (arms - 1) / 2 * n2 * n2; }

  bool operator==(const ArrowheadPattern&) const = default;
};

/// Partial matrix with arrowhead pattern. Unspecified entries are not stored.
class PartialMatrix {
 public:
  PartialMatrix(ArrowheadPattern pattern, SymMatrix nw, std::vector<Matrix> arm_cross,
                std::vector<SymMatrix> arm_diag);

  /// Declares the entries of `full` outside `pattern` unspecified.
  static PartialMatrix from_full(const SymMatrix& full, const ArrowheadPattern& pattern);
  static PartialMatrix zero(const ArrowheadPattern& pattern);

  const ArrowheadPattern& pattern() const { return pattern_; }
  const SymMatrix& nw() const { return nw_; }
  /// Z_i, shape n2 x n1.
  const Matrix& cross(std::size_t arm) const { return cross_.at(arm); }
  /// Y_i, order n2.
  const SymMatrix& arm_diag(std::size_t arm) const { return diag_.at(arm); }

  std::optional<double> entry(std::size_t i, std::size_t j) const;
  /// Copy with unspecified entries replaced by zero.
  SymMatrix zero_filled() const;
  /// Multiplies every specified entry by `factor`.
  PartialMatrix scaled(double factor) const;

 private:
  ArrowheadPattern pattern_;
  SymMatrix nw_;
  std::vector<Matrix> cross_;
  std::vector<SymMatrix> diag_;
};

/// A full matrix together with the partial matrix it completes.
struct Completion {
  SymMatrix full;
  std::shared_ptr<const PartialMatrix> source;
};

/// The fully specified principal submatrix [[X, Z_i^T], [Z_i, Y_i]] of `arm`
/// (0-based). Throws std::out_of_range for a bad arm index.
SymMatrix extract_block(const PartialMatrix& pm, std::size_t arm);

/// Frobenius product over specified entries only (zero-filled product).
double partial_frobenius(const PartialMatrix& a, const PartialMatrix& b);

/// Builds the full matrix from `pm` and the unspecified off-arm blocks
/// Y_{ij}, i < j, listed in lexicographic order (0,1), (0,2), ..., (1,2), ...
Completion assemble_completion(const PartialMatrix& pm, const std::vector<Matrix>& off_blocks);

/// True iff `full` matches every specified entry of `pm` within `tol`.
bool agrees(const SymMatrix& full, const PartialMatrix& pm, double tol = kDefaultAgreementTol);

}  // namespace cppc
