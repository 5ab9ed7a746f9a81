#include "cppc/cones.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace cppc {

namespace {

void check_dim(const GroundCone& k, const Vector& x, const char* what) {
  if (static_cast<std::size_t>(x.size()) != k.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

std::string describe_negative_entry(const SymMatrix& m, double tol) {
  for (std::size_t i = 0; i < m.order(); ++i)
    for (std::size_t j = i; j < m.order(); ++j)
      if (m(i, j) < -tol) {
        std::ostringstream os;
        os << "negative entry (" << i << "," << j << ") = " << m(i, j);
        return os.str();
      }
  return {};
}

double psd_threshold(const EigenDecomposition& eig, double tol) {
  return -tol * std::max(1.0, eig.largest_abs());
}

}  // namespace

void GroundCone::push(ConeFactor f) {
  if (f.dim == 0) return;
  if (!factors_.empty() && factors_.back().kind == f.kind) {
    factors_.back().dim += f.dim;
    return;
  }
  factors_.push_back(f);
}

GroundCone GroundCone::orthant(std::size_t n) {
  GroundCone k;
  k.push({ConeFactor::Kind::Orthant, n});
  return k;
}

GroundCone GroundCone::free(std::size_t n) {
  GroundCone k;
  k.push({ConeFactor::Kind::Free, n});
  return k;
}

GroundCone GroundCone::zero(std::size_t n) {
  GroundCone k;
  k.push({ConeFactor::Kind::Zero, n});
  return k;
}

GroundCone GroundCone::product(const std::vector<GroundCone>& parts) {
  GroundCone k;
  for (const auto& p : parts)
    for (const auto& f : p.factors_) k.push(f);
  return k;
}

std::size_t GroundCone::dim() const {
  std::size_t n = 0;
  for (const auto& f : factors_) n += f.dim;
  return n;
}

std::vector<ConeFactor::Kind> GroundCone::coordinate_kinds() const {
  std::vector<ConeFactor::Kind> out;
  out.reserve(dim());
  for (const auto& f : factors_) out.insert(out.end(), f.dim, f.kind);
  return out;
}

bool GroundCone::is_orthant() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const ConeFactor& f) { return f.kind == ConeFactor::Kind::Orthant; });
}

bool GroundCone::within_orthant() const {
  return std::none_of(factors_.begin(), factors_.end(),
                      [](const ConeFactor& f) { return f.kind == ConeFactor::Kind::Free; });
}

bool cone_contains(const GroundCone& k, const Vector& x, double tol) {
  check_dim(k, x, "cone_contains");
  const auto kinds = k.coordinate_kinds();
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    const double v = x(static_cast<Eigen::Index>(j));
    if (!std::isfinite(v)) return false;
    switch (kinds[j]) {
      case ConeFactor::Kind::Orthant:
        if (v < -tol) return false;
        break;
      case ConeFactor::Kind::Zero:
        if (std::abs(v) > tol) return false;
        break;
      case ConeFactor::Kind::Free:
        break;
    }
  }
  return true;
}

GroundCone dual_cone(const GroundCone& k) {
  std::vector<GroundCone> parts;
  for (const auto& f : k.factors()) {
    switch (f.kind) {
      case ConeFactor::Kind::Orthant: parts.push_back(GroundCone::orthant(f.dim)); break;
      case ConeFactor::Kind::Free: parts.push_back(GroundCone::zero(f.dim)); break;
      case ConeFactor::Kind::Zero: parts.push_back(GroundCone::free(f.dim)); break;
    }
  }
  return GroundCone::product(parts);
}

bool interior_dual_contains(const GroundCone& k, const Vector& g, double tol) {
  check_dim(k, g, "interior_dual_contains");
  const auto kinds = k.coordinate_kinds();
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    const double v = g(static_cast<Eigen::Index>(j));
    if (!std::isfinite(v)) return false;
    switch (kinds[j]) {
      case ConeFactor::Kind::Orthant:
        if (!(v > tol)) return false;
        break;
      case ConeFactor::Kind::Free:
        return false;
      case ConeFactor::Kind::Zero:
        break;
    }
  }
  return true;
}

bool is_psd(const SymMatrix& m, double tol) {
  const EigenDecomposition eig = jacobi_eigen(m.dense());
  return eig.values(0) >= psd_threshold(eig, tol);
}

bool is_dnn(const SymMatrix& m, double tol) {
  if (m.dense().minCoeff() < -tol) return false;
  return is_psd(m, tol);
}

std::optional<Matrix> cp_factorize(const SymMatrix& m, const CpFactorOptions& opts) {
  const auto n = static_cast<Eigen::Index>(m.order());
  std::vector<bool> mask = opts.nonneg_rows;
  if (mask.empty()) mask.assign(static_cast<std::size_t>(n), true);
  if (mask.size() != m.order()) throw std::invalid_argument("cp_factorize: mask length mismatch");

  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (mask[static_cast<std::size_t>(i)] && mask[static_cast<std::size_t>(j)] && m.dense()(i, j) < -opts.tol)
        return std::nullopt;
  const EigenDecomposition eig = jacobi_eigen(m.dense());
  if (eig.values(0) < psd_threshold(eig, std::max(opts.tol, kDefaultPsdTol))) return std::nullopt;

  // Square root restricted to the numerically positive spectrum.
  const double cut = 1e-14 * std::max(1.0, eig.largest_abs());
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = n - 1; k >= 0; --k)
    if (eig.values(k) > cut) keep.push_back(k);
  const auto rank = static_cast<Eigen::Index>(keep.size());
  if (rank == 0) return Matrix::Zero(n, 1);

  Eigen::Index r = opts.rank_budget > 0 ? static_cast<Eigen::Index>(opts.rank_budget) : n * (n + 1) / 2;
  r = std::max(r, rank);
  Matrix a = Matrix::Zero(n, r);
  for (Eigen::Index c = 0; c < rank; ++c) {
    Vector col = eig.vectors.col(keep[static_cast<std::size_t>(c)]) * std::sqrt(eig.values(keep[static_cast<std::size_t>(c)]));
    double masked_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask[static_cast<std::size_t>(i)]) masked_sum += col(i);
    if (masked_sum < 0.0) col = -col;
    a.col(c) = col;
  }

  auto clip = [&](const Matrix& aq) {
    Matrix b = aq;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask[static_cast<std::size_t>(i)]) b.row(i) = b.row(i).cwiseMax(0.0);
    return b;
  };
  auto residual = [&](const Matrix& b) { return (b * b.transpose() - m.dense()).norm(); };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < std::max(1, opts.restarts); ++attempt) {
    Matrix q = Matrix::Identity(r, r);
    if (attempt > 0) {
      Matrix g(r, r);
      for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) g(i, j) = normal(rng);
      Eigen::HouseholderQR<Matrix> qr(g);
      q = qr.householderQ();
    }
    for (int it = 0; it < opts.max_iters; ++it) {
      const Matrix aq = a * q;
      const Matrix b = clip(aq);
      if (residual(b) <= opts.tol) {
        // Drop all-zero columns from the witness.
        std::vector<Eigen::Index> cols;
        for (Eigen::Index c = 0; c < b.cols(); ++c)
          if (b.col(c).lpNorm<Eigen::Infinity>() > 0.0) cols.push_back(c);
        if (cols.empty()) return Matrix::Zero(n, 1);
        Matrix out(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = b.col(cols[c]);
        return out;
      }
      Eigen::JacobiSVD<Matrix> svd(a.transpose() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
      q = svd.matrixU() * svd.matrixV().transpose();
    }
  }
  return std::nullopt;
}

namespace {

// Exact witness for (numerically) rank-one input: M = z z^T with the sign
// of z chosen so its masked part is nonnegative.
std::optional<Matrix> rank_one_factor(const SymMatrix& m, const EigenDecomposition& eig,
                                      const std::vector<bool>& mask, double fit_tol) {
  const Eigen::Index n = eig.values.size();
  const double top = eig.values(n - 1);
  if (top <= 0.0) return Matrix(Matrix::Zero(n, 1));
  if (n > 1 && eig.values(n - 2) > 1e-12 * top) return std::nullopt;
  Vector z = std::sqrt(top) * eig.vectors.col(n - 1);
  auto masked = [&](Eigen::Index i) { return mask.empty() || mask[static_cast<std::size_t>(i)]; };
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (masked(i)) s += z(i);
  if (s < 0.0) z = -z;
  for (Eigen::Index i = 0; i < n; ++i)
    if (masked(i)) {
      if (z(i) < -fit_tol) return std::nullopt;
      z(i) = std::max(z(i), 0.0);
    }
  if ((z * z.transpose() - m.dense()).norm() > fit_tol) return std::nullopt;
  return Matrix(z);
}

}  // namespace

MembershipVerdict is_cp(const SymMatrix& m, double tol) {
  MembershipVerdict out;
  out.tol = tol;
  if (const std::string neg = describe_negative_entry(m, tol); !neg.empty()) {
    out.verdict = MembershipVerdict::Verdict::NotMember;
    out.reason = neg;
    return out;
  }
  const EigenDecomposition eig = jacobi_eigen(m.dense());
  if (eig.values(0) < psd_threshold(eig, tol)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << eig.values(0) << " below PSD threshold";
    out.verdict = MembershipVerdict::Verdict::NotMember;
    out.reason = os.str();
    return out;
  }
  const double fit_tol = std::max(1e-8, tol) * std::max(1.0, m.dense().norm());
  if (auto z = rank_one_factor(m, eig, {}, fit_tol)) {
    out.verdict = MembershipVerdict::Verdict::Member;
    out.reason = "rank at most one with nonnegative generator";
    out.factor = std::move(z);
    return out;
  }
  if (m.order() <= 4) {
    // Doubly nonnegative equals completely positive up to order four.
    out.verdict = MembershipVerdict::Verdict::Member;
    out.reason = "doubly nonnegative of order <= 4";
    return out;
  }
  CpFactorOptions fo;
  fo.tol = fit_tol;
  auto factor = cp_factorize(m, fo);
  if (factor) {
    out.verdict = MembershipVerdict::Verdict::Member;
    out.reason = "nonnegative factor found";
    out.factor = std::move(factor);
  } else {
    out.verdict = MembershipVerdict::Verdict::Unknown;
    out.reason = "doubly nonnegative but no nonnegative factor found";
  }
  return out;
}

MembershipVerdict is_cpp(const SymMatrix& m, const GroundCone& k, double tol) {
  if (k.dim() != m.order()) throw std::invalid_argument("is_cpp: dimension mismatch");
  const auto kinds = k.coordinate_kinds();
  std::vector<std::size_t> orth;
  std::vector<std::size_t> live;
  MembershipVerdict out;
  out.tol = tol;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == ConeFactor::Kind::Zero) {
      for (std::size_t j = 0; j < kinds.size(); ++j)
        if (std::abs(m(i, j)) > tol) {
          out.verdict = MembershipVerdict::Verdict::NotMember;
          out.reason = "nonzero entry in a zero-cone row";
          return out;
        }
      continue;
    }
    live.push_back(i);
    if (kinds[i] == ConeFactor::Kind::Orthant) orth.push_back(i);
  }
  if (live.empty()) {
    out.verdict = MembershipVerdict::Verdict::Member;
    out.factor = Matrix::Zero(static_cast<Eigen::Index>(m.order()), 1);
    return out;
  }
  const SymMatrix sub = m.principal(live);
  auto lift_factor = [&](const Matrix& f) {
    Matrix full = Matrix::Zero(static_cast<Eigen::Index>(m.order()), f.cols());
    for (std::size_t i = 0; i < live.size(); ++i)
      full.row(static_cast<Eigen::Index>(live[i])) = f.row(static_cast<Eigen::Index>(i));
    return full;
  };
  if (orth.size() == live.size()) {
    out = is_cp(sub, tol);
    if (out.factor) out.factor = lift_factor(*out.factor);
    return out;
  }

  for (std::size_t a : orth)
    for (std::size_t b : orth)
      if (m(a, b) < -tol) {
        out.verdict = MembershipVerdict::Verdict::NotMember;
        out.reason = "negative entry between sign-constrained coordinates";
        return out;
      }
  if (!is_psd(sub, tol)) {
    out.verdict = MembershipVerdict::Verdict::NotMember;
    out.reason = "not positive semidefinite";
    return out;
  }
  if (orth.size() <= 1) {
    out.verdict = MembershipVerdict::Verdict::Member;
    out.reason = "PSD with at most one sign-constrained coordinate";
    return out;
  }
  CpFactorOptions fo;
  fo.tol = std::max(1e-8, tol) * std::max(1.0, m.dense().norm());
  fo.nonneg_rows.assign(live.size(), false);
  for (std::size_t i = 0; i < live.size(); ++i)
    fo.nonneg_rows[i] = kinds[live[i]] == ConeFactor::Kind::Orthant;
  if (auto z = rank_one_factor(sub, jacobi_eigen(sub.dense()), fo.nonneg_rows, fo.tol)) {
    out.verdict = MembershipVerdict::Verdict::Member;
    out.reason = "rank at most one with sign-constrained generator";
    out.factor = lift_factor(*z);
    return out;
  }
  if (auto f = cp_factorize(sub, fo)) {
    out.verdict = MembershipVerdict::Verdict::Member;
    out.reason = "sign-constrained factor found";
    out.factor = lift_factor(*f);
  } else {
    out.verdict = MembershipVerdict::Verdict::Unknown;
    out.reason = "necessary conditions hold but no factor found";
  }
  return out;
}

}  // namespace cppc
