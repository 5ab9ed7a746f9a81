#include "cppc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cppc {

double EigenDecomposition::largest_abs() const {
  if (values.size() == 0) return 0.0;
  return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

EigenDecomposition jacobi_eigen(const Matrix& a, int max_sweeps) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jacobi_eigen: matrix is not square");
  const Eigen::Index n = a.rows();

  Matrix m = a.triangularView<Eigen::Upper>();
  m.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
  Matrix v = Matrix::Identity(n, n);

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!std::isfinite(m(i, j))) throw std::invalid_argument("jacobi_eigen: non-finite entry");

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += m(p, q) * m(p, q);
    return std::sqrt(2.0 * s);
  };

  const double total = m.norm();
  bool converged = (n <= 1) || off_norm() <= 1e-300;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double app = m(p, p);
        const double aqq = m(q, q);
        // Negligible relative to both diagonals: annihilate without rotating.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          m(p, q) = m(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = m(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    const double off = off_norm();
    converged = off <= 1e-15 * total || off <= 1e-300;
  }
  if (!converged) throw EigenSolverError("jacobi_eigen: no convergence within sweep limit");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return m(i, i) < m(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = m(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

Matrix symmetric_pinv(const Matrix& a, double rel_cutoff) {
  const EigenDecomposition eig = jacobi_eigen(a);
  const double cutoff = rel_cutoff * std::max(eig.largest_abs(), 1e-300);
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (std::abs(eig.values(k)) <= cutoff) continue;
    out += (1.0 / eig.values(k)) * eig.vectors.col(k) * eig.vectors.col(k).transpose();
  }
  return out;
}

}  // namespace cppc
