#include "cppc/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cppc {

namespace {

class Tableau {
 public:
  // rows: constraints (last row is the objective), cols: variables + rhs.
  Tableau(Matrix t, std::vector<Eigen::Index> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  // Minimizes the objective row over columns [0, ncols). Returns false when
  // unbounded.
  LpResult::Status run(Eigen::Index ncols, int& pivots_left) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index rhs = t_.cols() - 1;
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < ncols; ++j)
        if (t_(m, j) < -tol_) {
          enter = j;
          break;
        }
      if (enter < 0) return LpResult::Status::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t_(i, enter) > tol_) {
          const double ratio = t_(i, rhs) / t_(i, enter);
          if (ratio < best - tol_ || (std::abs(ratio - best) <= tol_ && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpResult::Status::Unbounded;
      if (--pivots_left < 0) return LpResult::Status::IterationLimit;
      pivot(leave, enter);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i)
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Matrix& t() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
  double tol_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol, int max_pivots) {
  const Eigen::Index n = lp.c.size();
  const Eigen::Index meq = lp.a_eq.rows();
  const Eigen::Index mub = lp.a_ub.rows();
  if ((meq > 0 && lp.a_eq.cols() != n) || lp.b_eq.size() != meq || (mub > 0 && lp.a_ub.cols() != n) ||
      lp.b_ub.size() != mub)
    throw std::invalid_argument("solve_lp: dimension mismatch");
  std::vector<bool> nonneg = lp.nonneg;
  if (nonneg.empty()) nonneg.assign(static_cast<std::size_t>(n), true);
  if (nonneg.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("solve_lp: sign mask length");

  // Standard form columns: structural (free split into +/-), slacks, artificials.
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(n)), neg(static_cast<std::size_t>(n), -1);
  Eigen::Index ns = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pos[static_cast<std::size_t>(j)] = ns++;
    if (!nonneg[static_cast<std::size_t>(j)]) neg[static_cast<std::size_t>(j)] = ns++;
  }
  const Eigen::Index m = meq + mub;
  const Eigen::Index nslack = mub;
  const Eigen::Index nart = m;
  const Eigen::Index ncol = ns + nslack + nart;

  Matrix t = Matrix::Zero(m + 1, ncol + 1);
  auto fill_row = [&](Eigen::Index r, const Eigen::Ref<const Vector>& coeff, double rhs, Eigen::Index slack) {
    for (Eigen::Index j = 0; j < n; ++j) {
      t(r, pos[static_cast<std::size_t>(j)]) = coeff(j);
      if (neg[static_cast<std::size_t>(j)] >= 0) t(r, neg[static_cast<std::size_t>(j)]) = -coeff(j);
    }
    if (slack >= 0) t(r, ns + slack) = 1.0;
    t(r, ncol) = rhs;
    if (rhs < 0.0) t.row(r) *= -1.0;
    t(r, ns + nslack + r) = 1.0;
  };
  for (Eigen::Index i = 0; i < meq; ++i) fill_row(i, lp.a_eq.row(i).transpose(), lp.b_eq(i), -1);
  for (Eigen::Index i = 0; i < mub; ++i) fill_row(meq + i, lp.a_ub.row(i).transpose(), lp.b_ub(i), i);

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = ns + nslack + i;

  // Phase 1 objective: sum of artificials, expressed in nonbasic terms.
  for (Eigen::Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) t(m, ns + nslack + i) = 0.0;

  Tableau tab(std::move(t), std::move(basis), tol);
  int pivots = max_pivots;
  LpResult out;
  auto st = tab.run(ns + nslack, pivots);
  if (st == LpResult::Status::IterationLimit) return out;
  const double scale = 1.0 + lp.b_eq.lpNorm<Eigen::Infinity>() * (meq > 0) + lp.b_ub.lpNorm<Eigen::Infinity>() * (mub > 0);
  if (-tab.t()(m, ncol) > 1e-8 * scale) {
    out.status = LpResult::Status::Infeasible;
    return out;
  }
  // Drive artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < ns + nslack) continue;
    for (Eigen::Index j = 0; j < ns + nslack; ++j)
      if (std::abs(tab.t()(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
  }
  // Phase 2 objective row.
  tab.t().row(m).setZero();
  for (Eigen::Index j = 0; j < n; ++j) {
    tab.t()(m, pos[static_cast<std::size_t>(j)]) = lp.c(j);
    if (neg[static_cast<std::size_t>(j)] >= 0) tab.t()(m, neg[static_cast<std::size_t>(j)]) = -lp.c(j);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index b = tab.basis()[static_cast<std::size_t>(i)];
    if (b < ns + nslack && tab.t()(m, b) != 0.0) tab.t().row(m) -= tab.t()(m, b) * tab.t().row(i);
  }
  // Artificials stuck in the basis sit on redundant rows; keep them out of pricing.
  st = tab.run(ns + nslack, pivots);
  if (st != LpResult::Status::Optimal) {
    out.status = st;
    return out;
  }
  Vector xs = Vector::Zero(ncol);
  for (Eigen::Index i = 0; i < m; ++i) xs(tab.basis()[static_cast<std::size_t>(i)]) = tab.t()(i, ncol);
  out.x.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.x(j) = xs(pos[static_cast<std::size_t>(j)]);
    if (neg[static_cast<std::size_t>(j)] >= 0) out.x(j) -= xs(neg[static_cast<std::size_t>(j)]);
  }
  out.objective = lp.c.dot(out.x);
  out.status = LpResult::Status::Optimal;
  return out;
}

}  // namespace cppc
