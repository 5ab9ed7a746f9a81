#include "cppc/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cppc {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& upper) {
  if (upper.rows() != upper.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  if (upper.rows() < 1) throw std::invalid_argument("SymMatrix: order must be at least 1");
  m_ = upper.triangularView<Eigen::Upper>();
  m_.triangularView<Eigen::StrictlyLower>() = m_.transpose().triangularView<Eigen::StrictlyLower>();
  require_finite(m_, "SymMatrix");
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) throw std::invalid_argument("SymMatrix: ragged rows");
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  *this = SymMatrix(m);
}

SymMatrix SymMatrix::zero(std::size_t order) {
  const auto n = static_cast<Eigen::Index>(order);
  return SymMatrix(Matrix::Zero(n, n));
}

SymMatrix SymMatrix::identity(std::size_t order) {
  const auto n = static_cast<Eigen::Index>(order);
  return SymMatrix(Matrix::Identity(n, n));
}

SymMatrix SymMatrix::principal(const std::vector<std::size_t>& idx) const {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Matrix out(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) out(a, b) = (*this)(idx.at(a), idx.at(b));
  return SymMatrix(out);
}

double SymMatrix::dot(const SymMatrix& other) const {
  if (order() != other.order()) throw std::invalid_argument("SymMatrix::dot: order mismatch");
  return m_.cwiseProduct(other.m_).sum();
}

ArrowheadPattern::ArrowheadPattern(std::size_t n1_, std::size_t n2_, std::size_t arms_)
    : n1(n1_), n2(n2_), arms(arms_) {
  if (n1 < 1 || n2 < 1 || arms < 1)
    throw std::invalid_argument("ArrowheadPattern: n1, n2 and S must all be at least 1");
}

std::optional<std::size_t> ArrowheadPattern::arm_of(std::size_t k) const {
  if (k < n1) return std::nullopt;
  return (k - n1) / n2;
}

bool ArrowheadPattern::is_specified(std::size_t i, std::size_t j) const {
  const auto ai = arm_of(i);
  const auto aj = arm_of(j);
  return !ai || !aj || *ai == *aj;
}

std::vector<std::size_t> ArrowheadPattern::block_indices(std::size_t arm) const {
  if (arm >= arms) throw std::out_of_range("arm index out of range");
  std::vector<std::size_t> idx;
  idx.reserve(n1 + n2);
  for (std::size_t k = 0; k < n1; ++k) idx.push_back(k);
  for (std::size_t k = 0; k < n2; ++k) idx.push_back(n1 + arm * n2 + k);
  return idx;
}

PartialMatrix::PartialMatrix(ArrowheadPattern pattern, SymMatrix nw, std::vector<Matrix> arm_cross,
                             std::vector<SymMatrix> arm_diag)
    : pattern_(pattern), nw_(std::move(nw)), cross_(std::move(arm_cross)), diag_(std::move(arm_diag)) {
  const auto n1 = static_cast<Eigen::Index>(pattern_.n1);
  const auto n2 = static_cast<Eigen::Index>(pattern_.n2);
  if (nw_.order() != pattern_.n1) throw std::invalid_argument("PartialMatrix: X has wrong order");
  if (cross_.size() != pattern_.arms || diag_.size() != pattern_.arms)
    throw std::invalid_argument("PartialMatrix: Z and Y must each have S entries");
  for (std::size_t i = 0; i < pattern_.arms; ++i) {
    if (cross_[i].rows() != n2 || cross_[i].cols() != n1)
      throw std::invalid_argument("PartialMatrix: Z_i must be n2 x n1");
    require_finite(cross_[i], "PartialMatrix");
    if (diag_[i].order() != pattern_.n2) throw std::invalid_argument("PartialMatrix: Y_i must have order n2");
  }
}

PartialMatrix PartialMatrix::from_full(const SymMatrix& full, const ArrowheadPattern& pattern) {
  if (full.order() != pattern.total_order())
    throw std::invalid_argument("PartialMatrix::from_full: order does not match pattern");
  std::vector<std::size_t> nw_idx;
  for (std::size_t k = 0; k < pattern.n1; ++k) nw_idx.push_back(k);
  std::vector<Matrix> cross;
  std::vector<SymMatrix> diag;
  const auto n1 = static_cast<Eigen::Index>(pattern.n1);
  const auto n2 = static_cast<Eigen::Index>(pattern.n2);
  for (std::size_t a = 0; a < pattern.arms; ++a) {
    const Eigen::Index off = n1 + static_cast<Eigen::Index>(a) * n2;
    cross.push_back(full.dense().block(off, 0, n2, n1));
    diag.push_back(SymMatrix(Matrix(full.dense().block(off, off, n2, n2))));
  }
  return PartialMatrix(pattern, full.principal(nw_idx), std::move(cross), std::move(diag));
}

PartialMatrix PartialMatrix::zero(const ArrowheadPattern& pattern) {
  return from_full(SymMatrix::zero(pattern.total_order()), pattern);
}

std::optional<double> PartialMatrix::entry(std::size_t i, std::size_t j) const {
  const std::size_t n = pattern_.total_order();
  if (i >= n || j >= n) throw std::out_of_range("PartialMatrix::entry: index out of range");
  if (!pattern_.is_specified(i, j)) return std::nullopt;
  if (i < j) std::swap(i, j);  // i >= j: i is the row in the lower triangle
  const auto ai = pattern_.arm_of(i);
  const auto aj = pattern_.arm_of(j);
  if (!ai) return nw_(i, j);
  const std::size_t ri = i - pattern_.n1 - *ai * pattern_.n2;
  if (!aj) return cross_[*ai](static_cast<Eigen::Index>(ri), static_cast<Eigen::Index>(j));
  const std::size_t rj = j - pattern_.n1 - *aj * pattern_.n2;
  return diag_[*ai](ri, rj);
}

SymMatrix PartialMatrix::zero_filled() const {
  const auto n = static_cast<Eigen::Index>(pattern_.total_order());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      if (auto v = entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) m(i, j) = *v;
  return SymMatrix(m);
}

PartialMatrix PartialMatrix::scaled(double factor) const {
  std::vector<Matrix> cross;
  std::vector<SymMatrix> diag;
  for (const auto& z : cross_) cross.push_back(factor * z);
  for (const auto& y : diag_) diag.push_back(SymMatrix(Matrix(factor * y.dense())));
  return PartialMatrix(pattern_, SymMatrix(Matrix(factor * nw_.dense())), std::move(cross), std::move(diag));
}

SymMatrix extract_block(const PartialMatrix& pm, std::size_t arm) {
  const auto& p = pm.pattern();
  if (arm >= p.arms) throw std::out_of_range("extract_block: arm index out of range");
  const auto n1 = static_cast<Eigen::Index>(p.n1);
  const auto n2 = static_cast<Eigen::Index>(p.n2);
  Matrix b(n1 + n2, n1 + n2);
  b.topLeftCorner(n1, n1) = pm.nw().dense();
  b.bottomLeftCorner(n2, n1) = pm.cross(arm);
  b.topRightCorner(n1, n2) = pm.cross(arm).transpose();
  b.bottomRightCorner(n2, n2) = pm.arm_diag(arm).dense();
  return SymMatrix(b);
}

double partial_frobenius(const PartialMatrix& a, const PartialMatrix& b) {
  if (!(a.pattern() == b.pattern())) throw std::invalid_argument("partial_frobenius: pattern mismatch");
  const std::size_t n = a.pattern().total_order();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += *a.entry(i, i) * *b.entry(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto aij = a.entry(i, j);
      if (aij) sum += 2.0 * *aij * *b.entry(i, j);
    }
  }
  return sum;
}

Completion assemble_completion(const PartialMatrix& pm, const std::vector<Matrix>& off_blocks) {
  const auto& p = pm.pattern();
  const std::size_t expected = p.arms * (p.arms - 1) / 2;
  if (off_blocks.size() != expected)
    throw std::invalid_argument("assemble_completion: expected S(S-1)/2 off-arm blocks");
  const auto n2 = static_cast<Eigen::Index>(p.n2);
  Matrix full = pm.zero_filled().dense();
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.arms; ++i) {
    for (std::size_t j = i + 1; j < p.arms; ++j, ++k) {
      const Matrix& blk = off_blocks[k];
      if (blk.rows() != n2 || blk.cols() != n2)
        throw std::invalid_argument("assemble_completion: off-arm block must be n2 x n2");
      require_finite(blk, "assemble_completion");
      const auto ri = static_cast<Eigen::Index>(p.n1 + i * p.n2);
      const auto rj = static_cast<Eigen::Index>(p.n1 + j * p.n2);
      full.block(ri, rj, n2, n2) = blk;
      full.block(rj, ri, n2, n2) = blk.transpose();
    }
  }
  return Completion{SymMatrix(full), std::make_shared<const PartialMatrix>(pm)};
}

bool agrees(const SymMatrix& full, const PartialMatrix& pm, double tol) {
  const std::size_t n = pm.pattern().total_order();
  if (full.order() != n) throw std::invalid_argument("agrees: order mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (auto v = pm.entry(i, j); v && !(std::abs(full(i, j) - *v) <= tol)) return false;
  return true;
}

}  // namespace cppc
