#include "cppc/qp_relax.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace cppc {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Sign mask for a block [1, x, y]: the leading coordinate is a nonnegative
// scalar, free coordinates drop their sign constraint.
std::vector<bool> mask_for(const GroundCone& k0, const GroundCone& ki) {
  std::vector<bool> mask{true};
  for (auto k : k0.coordinate_kinds()) mask.push_back(k != ConeFactor::Kind::Free);
  for (auto k : ki.coordinate_kinds()) mask.push_back(k != ConeFactor::Kind::Free);
  return mask;
}

// Zero-factor coordinates get their diagonal pinned to 0; PSD does the rest.
void pin_zero_coords(ConicProgram& p, std::size_t b, const GroundCone& k, std::size_t offset) {
  const auto kinds = k.coordinate_kinds();
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    if (kinds[j] != ConeFactor::Kind::Zero) continue;
    LinearForm f;
    f.add(p.entry_var(b, offset + j, offset + j), 1.0);
    p.add_equality(std::move(f), 0.0);
  }
}

double block_scale(const SymMatrix& m) { return std::max(1.0, jacobi_eigen(m.dense()).largest_abs()); }

}  // namespace

// ---------------------------------------------------------------- instances

void QPInstance::validate() const {
  const auto n = a.size();
  if (n < 1) throw std::invalid_argument("QPInstance: need at least one variable");
  if (ix(A.order()) != n) throw std::invalid_argument("QPInstance: A and a differ in size");
  if (F.cols() != n && F.rows() > 0) throw std::invalid_argument("QPInstance: F has the wrong number of columns");
  if (F.rows() != d.size()) throw std::invalid_argument("QPInstance: F and d differ in row count");
  if (ix(K.dim()) != n) throw std::invalid_argument("QPInstance: cone dimension does not match x");
  if (!a.allFinite() || !all_finite(F) || !d.allFinite())
    throw std::invalid_argument("QPInstance: non-finite data");
}

double QPInstance::objective(const Vector& x) const { return x.dot(A.dense() * x) + 2.0 * a.dot(x); }

bool QPInstance::feasible(const Vector& x, double tol) const {
  if (x.size() != a.size() || !x.allFinite()) return false;
  if (!cone_contains(K, x, tol)) return false;
  if (F.rows() == 0) return true;
  const Vector r = F * x - d;
  for (Idx i = 0; i < r.size(); ++i)
    if (r(i) > tol * (1.0 + std::abs(d(i)))) return false;
  return true;
}

GeneralInstance GeneralInstance::from_raw(SymMatrix A, Vector a, ConstraintData data, const std::vector<Matrix>& B,
                                          std::vector<SymMatrix> C, const std::vector<Vector>& c, double tol) {
  data.validate();
  const std::size_t s = data.arms();
  const auto nx = ix(data.nx());
  if (ix(A.order()) != nx || a.size() != nx) throw std::invalid_argument("GeneralInstance: A, a do not match K0");
  if (B.size() != s || C.size() != s || c.size() != s)
    throw std::invalid_argument("GeneralInstance: one B_i, C_i and c_i per arm required");

  GeneralInstance gi;
  gi.A_ = std::move(A);
  gi.a_ = std::move(a);
  for (std::size_t i = 0; i < s; ++i) {
    const Vector& g = data.g[i];
    const auto ny = g.size();
    if (ny < 1) throw std::invalid_argument("GeneralInstance: arm " + std::to_string(i + 1) + " has no y part");
    if (B[i].rows() != nx || B[i].cols() != ny || ix(C[i].order()) != ny || c[i].size() != ny)
      throw std::invalid_argument("GeneralInstance: coupling sizes wrong for arm " + std::to_string(i + 1));
    const double gg = g.squaredNorm();
    Vector b = Vector::Zero(nx);
    double beta = 0.0;
    if (gg > 0.0) {
      b = B[i] * g / gg;
      beta = g.dot(c[i]) / gg;
    }
    const double bscale = std::max(1.0, B[i].cwiseAbs().maxCoeff());
    const double cscale = std::max(1.0, c[i].cwiseAbs().maxCoeff());
    if ((B[i] - b * g.transpose()).cwiseAbs().maxCoeff() > tol * bscale)
      throw std::invalid_argument("GeneralInstance: B_" + std::to_string(i + 1) + " is not of the form b g^T");
    if ((c[i] - beta * g).cwiseAbs().maxCoeff() > tol * cscale)
      throw std::invalid_argument("GeneralInstance: c_" + std::to_string(i + 1) + " is not a multiple of g");
    gi.b_.push_back(std::move(b));
    gi.beta_.push_back(beta);
  }
  gi.C_ = std::move(C);
  gi.data_ = std::move(data);
  return gi;
}

GeneralInstance GeneralInstance::from_qp(const QPInstance& qp) {
  qp.validate();
  const auto n = ix(qp.n());
  std::vector<Vector> f;
  std::vector<double> d;
  for (Idx i = 0; i < qp.F.rows(); ++i) {
    f.emplace_back(qp.F.row(i).transpose());
    d.push_back(qp.d(i));
  }
  const std::size_t m = qp.m();
  auto data = ConstraintData::width_one(qp.K, Vector::Zero(n), 0.0, std::move(f), std::vector<double>(m, 1.0),
                                        std::move(d));
  std::vector<Matrix> B(m, Matrix::Zero(n, 1));
  std::vector<SymMatrix> C(m, SymMatrix::zero(1));
  std::vector<Vector> c(m, Vector::Zero(1));
  return from_raw(qp.A, 2.0 * qp.a, std::move(data), B, std::move(C), c);
}

// ---------------------------------------------------------------- relaxation

Relaxation build_general_relaxation(const GeneralInstance& gi, bool reduce) {
  const ConstraintData& data = gi.data();
  const std::size_t nx = data.nx();
  const std::size_t s = data.arms();
  Relaxation r;
  r.nx = nx;
  ConicProgram& p = r.program;
  const bool f0_pair = data.f0.size() == ix(nx) && data.f0.cwiseAbs().maxCoeff() > 0.0;

  // Known kernel of arm block i, one column per vector.
  auto known_kernel = [&](std::size_t i) {
    const auto ny = data.g[i].size();
    const Idx order = 1 + ix(nx) + ny;
    std::vector<Vector> cols;
    Vector v(order);
    v << -data.d[i], data.f[i], data.g[i];
    cols.push_back(v);
    if (f0_pair) {
      Vector w = Vector::Zero(order);
      w(0) = -data.d0;
      w.segment(1, ix(nx)) = data.f0;
      cols.push_back(w);
    }
    const auto k0 = data.k0.coordinate_kinds();
    const auto ki = data.ki[i].coordinate_kinds();
    for (std::size_t j = 0; j < k0.size(); ++j)
      if (k0[j] == ConeFactor::Kind::Zero) cols.push_back(Vector::Unit(order, 1 + ix(j)));
    for (std::size_t j = 0; j < ki.size(); ++j)
      if (ki[j] == ConeFactor::Kind::Zero) cols.push_back(Vector::Unit(order, 1 + ix(nx) + ix(j)));
    Matrix k(order, ix(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) k.col(ix(c)) = cols[c];
    return k;
  };
  // Orthonormal basis of the complement of range(k); empty if none.
  auto complement = [](const Matrix& k) -> Matrix {
    Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullU);
    const Vector& sv = svd.singularValues();
    Idx rank = 0;
    for (Idx t = 0; t < sv.size(); ++t)
      if (sv(t) > 1e-12 * std::max(1.0, sv(0))) ++rank;
    return svd.matrixU().rightCols(k.rows() - rank);
  };

  std::vector<Matrix> faces(s);
  if (s == 0) {
    r.degenerate = true;
    BlockSpec spec;
    spec.order = 1 + nx;
    spec.sign_mask = mask_for(data.k0, GroundCone{});
    r.nw_block = p.add_block(spec);
    pin_zero_coords(p, r.nw_block, data.k0, 1);
  } else {
    for (std::size_t i = 0; i < s; ++i) {
      BlockSpec spec;
      spec.order = 1 + nx + data.ki[i].dim();
      spec.sign_mask = mask_for(data.k0, data.ki[i]);
      if (reduce) faces[i] = complement(known_kernel(i));
      const bool face = reduce && faces[i].cols() > 0;
      spec.psd = !face;
      const std::size_t b = p.add_block(spec);
      r.arm_blocks.push_back(b);
      if (!face) {
        faces[i].resize(0, 0);
        pin_zero_coords(p, b, data.ki[i], 1 + nx);
        if (i == 0) pin_zero_coords(p, b, data.k0, 1);
      }
    }
    r.nw_block = r.arm_blocks[0];
    // Face blocks come after all arm blocks so arm indices stay 0..S-1.
    for (std::size_t i = 0; i < s; ++i) {
      if (faces[i].cols() == 0) continue;
      BlockSpec spec;
      spec.order = static_cast<std::size_t>(faces[i].cols());
      spec.nonneg = false;
      const std::size_t nb = p.add_block(spec);
      r.face_blocks.push_back(nb);
      const Matrix& v = faces[i];
      const std::size_t b = r.arm_blocks[i];
      for (std::size_t row = 0; row < p.block(b).order; ++row)
        for (std::size_t col = row; col < p.block(b).order; ++col) {
          LinearForm tie;
          tie.add(p.entry_var(b, row, col), 1.0);
          // -(V N V^T)_{row,col}
          const Matrix outer = v.row(ix(row)).transpose() * v.row(ix(col));
          p.add_frobenius(tie, nb, -0.5 * (outer + outer.transpose()));
          p.add_equality(std::move(tie), 0.0);
        }
      r.reduced = true;
    }
  }

  const std::size_t b0 = r.nw_block;
  std::vector<std::size_t> all_blocks = r.arm_blocks;
  if (r.degenerate) all_blocks.push_back(b0);

  for (std::size_t b : all_blocks) {
    LinearForm one;
    one.add(p.entry_var(b, 0, 0), 1.0);
    p.add_equality(std::move(one), 1.0);
  }
  // The arms share x and X.
  for (std::size_t k = 1; k < r.arm_blocks.size(); ++k) {
    const std::size_t b = r.arm_blocks[k];
    for (std::size_t i = 0; i <= nx; ++i)
      for (std::size_t j = i; j <= nx; ++j) {
        if (i == 0 && j == 0) continue;
        LinearForm link;
        link.add(p.entry_var(b, i, j), 1.0);
        link.add(p.entry_var(b0, i, j), -1.0);
        p.add_equality(std::move(link), 0.0);
      }
  }

  // Linear and squared constraint for each arm, and for F_0 when nontrivial.
  // A face block already implies both.
  auto add_pair = [&](std::size_t b, const Vector& w, double rhs) {
    LinearForm lin;
    for (Idx k = 0; k < w.size(); ++k)
      if (w(k) != 0.0) lin.add(p.entry_var(b, 0, static_cast<std::size_t>(k) + 1), w(k));
    p.add_equality(std::move(lin), rhs);
    Vector full = Vector::Zero(w.size() + 1);
    full.tail(w.size()) = w;
    LinearForm quad;
    p.add_frobenius(quad, b, full * full.transpose());
    p.add_equality(std::move(quad), rhs * rhs);
  };
  for (std::size_t i = 0; i < s; ++i) {
    if (faces[i].cols() > 0) continue;
    const auto ny = data.g[i].size();
    Vector w(ix(nx) + ny);
    w << data.f[i], data.g[i];
    add_pair(r.arm_blocks[i], w, data.d[i]);
  }
  if (f0_pair && (s == 0 || faces[0].cols() == 0)) add_pair(b0, data.f0, data.d0);

  // Objective.
  for (std::size_t b : all_blocks) {
    const std::size_t order = p.block(b).order;
    Matrix c = Matrix::Zero(ix(order), ix(order));
    if (b == b0) {
      c.block(1, 1, ix(nx), ix(nx)) = gi.A().dense();
      c.block(0, 1, 1, ix(nx)) = 0.5 * gi.a().transpose();
      c.block(1, 0, ix(nx), 1) = 0.5 * gi.a();
    }
    if (!r.degenerate) {
      const std::size_t i = static_cast<std::size_t>(std::find(r.arm_blocks.begin(), r.arm_blocks.end(), b) -
                                                     r.arm_blocks.begin());
      const Vector& g = data.g[i];
      const auto ny = g.size();
      const Matrix B = gi.b(i) * g.transpose();
      // B . Z^T with the x rows above the y columns.
      c.block(1, 1 + ix(nx), ix(nx), ny) += 0.5 * B;
      c.block(1 + ix(nx), 1, ny, ix(nx)) += 0.5 * B.transpose();
      c.block(1 + ix(nx), 1 + ix(nx), ny, ny) += gi.C(i).dense();
      c.block(0, 1 + ix(nx), 1, ny) += 0.5 * gi.beta(i) * g.transpose();
      c.block(1 + ix(nx), 0, ny, 1) += 0.5 * gi.beta(i) * g;
    }
    p.add_frobenius(p.objective(), b, c);
  }
  p.validate();
  return r;
}

Relaxation build_sparse_relaxation(const QPInstance& qp, bool reduce) {
  return build_general_relaxation(GeneralInstance::from_qp(qp), reduce);
}

SymMatrix RelaxationSolution::nw() const {
  const auto n = x.size();
  Matrix m(n + 1, n + 1);
  m(0, 0) = 1.0;
  m.block(0, 1, 1, n) = x.transpose();
  m.block(1, 0, n, 1) = x;
  m.block(1, 1, n, n) = X.dense();
  return SymMatrix(m);
}

RelaxationSolution extract_solution(const Relaxation& r, const SolveResult& res) {
  RelaxationSolution sol;
  sol.diagnostics = res;
  const Idx nx = ix(r.nx);
  const SymMatrix nw = r.program.block_value(res.values, r.nw_block);
  sol.x = nw.dense().block(1, 0, nx, 1);
  sol.X = SymMatrix(Matrix(nw.dense().block(1, 1, nx, nx)));
  sol.objective = r.program.objective_value(res.values);
  bool width_one = true;
  for (std::size_t b : r.arm_blocks) {
    sol.blocks.push_back(r.program.block_value(res.values, b));
    if (sol.blocks.back().order() != r.nx + 2) width_one = false;
  }
  if (width_one) {
    for (const SymMatrix& m : sol.blocks) {
      const Matrix& d = m.dense();
      sol.z.emplace_back(d.block(1, 1 + nx, nx, 1));
      sol.y.push_back(d(0, 1 + nx));
      sol.Y.push_back(d(1 + nx, 1 + nx));
    }
  }
  return sol;
}

Bounds solve_bounds(const QPInstance& qp, const SolveOptions& opts, double feas_tol) {
  qp.validate();
  const Relaxation r = build_sparse_relaxation(qp);
  const SolveResult res = solve(r.program, opts);
  Bounds out;
  out.sol = extract_solution(r, res);
  out.lower = out.sol.objective;
  std::ostringstream msg;
  msg << "solver " << to_string(res.status) << " after " << res.iterations << " iterations";
  if (r.degenerate) msg << "; no linear constraints, relaxation is a single block";

  // The x-part, and its projection onto K, are candidate QP points.
  Vector clipped = out.sol.x;
  const auto kinds = qp.K.coordinate_kinds();
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    if (kinds[j] == ConeFactor::Kind::Orthant) clipped(ix(j)) = std::max(0.0, clipped(ix(j)));
    if (kinds[j] == ConeFactor::Kind::Zero) clipped(ix(j)) = 0.0;
  }
  for (const Vector* cand : {&out.sol.x, &clipped}) {
    if (!qp.feasible(*cand, feas_tol)) continue;
    const double v = qp.objective(*cand);
    if (!out.upper || v < *out.upper) out.upper = v;
  }
  if (!out.upper) msg << "; x-part infeasible, no upper bound";
  out.diagnostics = msg.str();
  return out;
}

// ---------------------------------------------------------------- certificates

bool rank_one_certificate(const RelaxationSolution& sol, double tol) {
  std::vector<SymMatrix> mats = sol.blocks;
  if (mats.empty()) mats.push_back(sol.nw());
  for (const SymMatrix& m : mats) {
    const EigenDecomposition eig = jacobi_eigen(m.dense());
    const auto n = eig.values.size();
    const double top = eig.values(n - 1);
    if (!(top > 0.0)) return false;
    if (n >= 2 && eig.values(n - 2) > tol * top) return false;
    if (eig.values(0) < -tol * top) return false;
  }
  return true;
}

std::vector<Vector> kernel_vectors(const SymMatrix& m, double tol) {
  const EigenDecomposition eig = jacobi_eigen(m.dense());
  const double scale = eig.largest_abs();
  std::vector<Vector> out;
  for (Idx k = 0; k < eig.values.size(); ++k)
    if (std::abs(eig.values(k)) <= tol * scale) out.emplace_back(eig.vectors.col(k));
  return out;
}

namespace {

std::vector<Vector> with_pairwise(const std::vector<Vector>& basis) {
  std::vector<Vector> out = basis;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      out.emplace_back(basis[i] + basis[j]);
      out.emplace_back(basis[i] - basis[j]);
    }
  return out;
}

std::optional<Vector> gamma_for(const QPInstance& qp, const Vector& u, double cert_tol) {
  Vector gamma(ix(qp.m()));
  for (Idx i = 0; i < qp.F.rows(); ++i) {
    const Vector fi = qp.F.row(i).transpose();
    const double slack =
        cert_tol * std::max({1.0, u.lpNorm<Eigen::Infinity>(), fi.lpNorm<Eigen::Infinity>(), std::abs(qp.d(i))});
    const auto g = scalar_lambda_feasible(u, 1.0, fi, qp.d(i), qp.K, LambdaSign::Nonneg, slack);
    if (!g) return std::nullopt;
    gamma(i) = *g;
  }
  return gamma;
}

bool polytope_bounded(const QPInstance& qp) {
  std::vector<Vector> f;
  std::vector<double> d;
  for (Idx i = 0; i < qp.F.rows(); ++i) {
    f.emplace_back(qp.F.row(i).transpose());
    d.push_back(qp.d(i));
  }
  const auto data = ConstraintData::width_one(qp.K, Vector::Zero(ix(qp.n())), 0.0, std::move(f),
                                              std::vector<double>(qp.m(), 1.0), std::move(d));
  return check_boundedness(data).status == Boundedness::Bounded;
}

}  // namespace

std::optional<CertificateB> certificate_b(const QPInstance& qp, const RelaxationSolution& sol,
                                          const CertificateOptions& opts) {
  const SymMatrix nw = sol.nw();
  for (Vector v : with_pairwise(kernel_vectors(nw, opts.kernel_tol))) {
    if (std::abs(v(0)) < 1e-8 * v.norm()) continue;
    v /= -v(0);
    CertificateB c;
    c.u = v.tail(v.size() - 1);
    if (!interior_dual_contains(qp.K, c.u)) continue;
    const auto gamma = gamma_for(qp, c.u, opts.cert_tol);
    if (!gamma) continue;
    c.gamma = *gamma;
    c.kernel_residual = (nw.dense() * v).lpNorm<Eigen::Infinity>();
    if (!verify_certificate_b(qp, sol, c, opts)) continue;
    c.polytope_bounded = polytope_bounded(qp);
    return c;
  }
  return std::nullopt;
}

bool verify_certificate_b(const QPInstance& qp, const RelaxationSolution& sol, const CertificateB& c,
                          const CertificateOptions& opts) {
  if (c.u.size() != ix(qp.n()) || c.gamma.size() != ix(qp.m())) return false;
  const SymMatrix nw = sol.nw();
  Vector v(c.u.size() + 1);
  v << -1.0, c.u;
  if ((nw.dense() * v).lpNorm<Eigen::Infinity>() > opts.cert_tol * block_scale(nw) * v.norm()) return false;
  if (!interior_dual_contains(qp.K, c.u)) return false;
  const auto kinds = qp.K.coordinate_kinds();
  for (Idx i = 0; i < qp.F.rows(); ++i) {
    const double gi = c.gamma(i);
    const double slack = opts.cert_tol * std::max({1.0, c.u.lpNorm<Eigen::Infinity>(),
                                                    qp.F.row(i).lpNorm<Eigen::Infinity>(), std::abs(qp.d(i))});
    if (gi < 0.0 || gi > qp.d(i) + slack) return false;
    for (std::size_t j = 0; j < kinds.size(); ++j) {
      const double r = gi * c.u(ix(j)) - qp.F(i, ix(j));
      if (kinds[j] == ConeFactor::Kind::Orthant && r < -slack) return false;
      if (kinds[j] == ConeFactor::Kind::Free && std::abs(r) > slack) return false;
    }
  }
  return true;
}

std::optional<CertificateA> certificate_a(const QPInstance& qp, const RelaxationSolution& sol,
                                          const CertificateOptions& opts) {
  if (sol.blocks.empty() || sol.y.size() != sol.blocks.size()) return std::nullopt;
  const Idx n = ix(qp.n());

  // Candidate directions: x-parts of kernel vectors, x itself, and the ones
  // vector; each is used as a unit vector.
  std::vector<Vector> dirs;
  auto push_dir = [&](Vector u) {
    const double nrm = u.norm();
    if (!(nrm > 1e-12)) return;
    u /= nrm;
    if (u.sum() < 0.0) u = -u;
    dirs.push_back(std::move(u));
  };
  for (const Vector& v : kernel_vectors(sol.nw(), opts.kernel_tol)) push_dir(v.tail(n));
  for (const SymMatrix& m : sol.blocks)
    for (const Vector& v : kernel_vectors(m, opts.kernel_tol)) push_dir(v.segment(1, n));
  push_dir(sol.x);
  push_dir(Vector::Ones(n));

  for (const Vector& u : dirs) {
    if (!interior_dual_contains(qp.K, u)) continue;
    CertificateA c;
    c.u = u;
    bool ok = true;
    for (const SymMatrix& m : sol.blocks) {
      const Matrix& d = m.dense();
      Vector ux = Vector::Zero(n + 2);
      ux.segment(1, n) = u;
      Matrix cols(n + 2, 2);
      cols.col(0) = d * ux;
      cols.col(1) = d.col(n + 1);
      const Vector coef = cols.completeOrthogonalDecomposition().solve(Vector(d.col(0)));
      if (!(coef(0) > 1e-9) || !(coef(1) > 1e-9)) {
        ok = false;
        break;
      }
      c.alpha.push_back(coef(0));
      c.w.push_back(coef(1));
    }
    if (!ok) continue;
    if (!verify_certificate_a(qp, sol, c, opts)) continue;
    return c;
  }
  return std::nullopt;
}

bool verify_certificate_a(const QPInstance& qp, const RelaxationSolution& sol, const CertificateA& c,
                          const CertificateOptions& opts) {
  const Idx n = ix(qp.n());
  if (c.u.size() != n || c.alpha.size() != sol.blocks.size() || c.w.size() != sol.blocks.size()) return false;
  if (!interior_dual_contains(qp.K, c.u)) return false;
  for (std::size_t i = 0; i < sol.blocks.size(); ++i) {
    if (!(c.alpha[i] > 0.0) || !(c.w[i] > 0.0)) return false;
    const SymMatrix& m = sol.blocks[i];
    if (ix(m.order()) != n + 2) return false;
    Vector v(n + 2);
    v << -1.0, c.alpha[i] * c.u, c.w[i];
    if ((m.dense() * v).lpNorm<Eigen::Infinity>() > opts.cert_tol * block_scale(m) * v.norm()) return false;
  }
  return true;
}

std::pair<bool, bool> lemma_equivalence_check(const SymMatrix& m, const Vector& a, const Vector& b, double r,
                                              double tol) {
  const Idx nx = a.size();
  const Idx ny = b.size();
  if (ix(m.order()) != 1 + nx + ny) throw std::invalid_argument("lemma_equivalence_check: size mismatch");
  if (!is_psd(m, tol)) throw std::invalid_argument("lemma_equivalence_check: matrix is not PSD");
  Vector w(1 + nx + ny);
  w << 0.0, a, b;
  const Matrix& d = m.dense();
  const double lin = d.row(0).dot(w);
  const double quad = w.dot(d * w);
  const double agg = quad - 2.0 * r * lin + r * r;
  const double s = std::max({1.0, std::abs(r), w.norm() * std::sqrt(d.cwiseAbs().maxCoeff())});
  const bool pair = std::abs(lin - r) <= tol * s && std::abs(quad - r * r) <= tol * s * s;
  const bool single = std::abs(agg) <= tol * s * s;
  return {pair, single};
}

// ---------------------------------------------------------------- report

const char* to_string(ExactnessReport::Overall o) {
  return o == ExactnessReport::Overall::ProvenExact ? "ProvenExact" : "Unknown";
}

ExactnessReport exactness_report(const QPInstance& qp, const ExactnessOptions& opts) {
  Bounds b = solve_bounds(qp, opts.solver);
  ExactnessReport rep;
  rep.lower = b.lower;
  rep.upper = b.upper;
  rep.solver_status = to_string(b.sol.diagnostics.status);
  rep.diagnostics = b.diagnostics;

  rep.rank_one = rank_one_certificate(b.sol, opts.rank_tol);
  if (rep.upper) rep.bounds_match = std::abs(*rep.upper - rep.lower) <= opts.bound_tol * (1.0 + std::abs(rep.lower));
  rep.cert_a = certificate_a(qp, b.sol, opts.cert);
  rep.cert_b = certificate_b(qp, b.sol, opts.cert);

  if (rep.rank_one) rep.proven_by.emplace_back("rank-one");
  if (rep.bounds_match) rep.proven_by.emplace_back("bounds");
  if (rep.cert_a) rep.proven_by.emplace_back("certificate-a");
  if (rep.cert_b) rep.proven_by.emplace_back("certificate-b");
  // Approximate solver output is all this rests on; an unconverged run
  // never proves anything.
  const bool converged = b.sol.diagnostics.status == SolveResult::Status::Optimal;
  if (!converged && !rep.proven_by.empty()) rep.diagnostics += "; evidence ignored, solver did not converge";
  rep.overall = converged && !rep.proven_by.empty() ? ExactnessReport::Overall::ProvenExact
                                                    : ExactnessReport::Overall::Unknown;
  rep.solution = std::move(b.sol);
  return rep;
}

// ---------------------------------------------------------------- oracle

QpOracleResult brute_force_qp(const QPInstance& qp, double feas_tol) {
  qp.validate();
  if (!qp.K.within_orthant()) throw std::invalid_argument("brute_force_qp: cone must be an orthant product");
  const Idx n = ix(qp.n());
  // All constraints as rows g^T x <= h: F x <= d, -x_j <= 0, and both signs
  // for zero coordinates.
  std::vector<Vector> rows;
  std::vector<double> rhs;
  for (Idx i = 0; i < qp.F.rows(); ++i) {
    rows.emplace_back(qp.F.row(i).transpose());
    rhs.push_back(qp.d(i));
  }
  const auto kinds = qp.K.coordinate_kinds();
  for (Idx j = 0; j < n; ++j) {
    rows.emplace_back(-Vector::Unit(n, j));
    rhs.push_back(0.0);
    if (kinds[static_cast<std::size_t>(j)] == ConeFactor::Kind::Zero) {
      rows.emplace_back(Vector::Unit(n, j));
      rhs.push_back(0.0);
    }
  }
  const std::size_t r = rows.size();
  if (r > 24) throw std::invalid_argument("brute_force_qp: too many constraints");

  QpOracleResult out;
  const Matrix h = 2.0 * qp.A.dense();
  for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
    const int k = __builtin_popcount(mask);
    if (k > n) continue;
    Matrix e(k, n);
    Vector eb(k);
    int t = 0;
    for (std::size_t c = 0; c < r; ++c)
      if (mask & (1u << c)) {
        e.row(t) = rows[c].transpose();
        eb(t++) = rhs[c];
      }
    Matrix kkt = Matrix::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = h;
    kkt.topRightCorner(n, k) = e.transpose();
    kkt.bottomLeftCorner(k, n) = e;
    Vector b(n + k);
    b << -2.0 * qp.a, eb;
    Eigen::FullPivLU<Matrix> lu(kkt);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) continue;  // covered by a smaller face
    ++out.faces_checked;
    const Vector x = lu.solve(b).head(n);
    bool ok = true;
    for (std::size_t c = 0; c < r && ok; ++c) ok = rows[c].dot(x) <= rhs[c] + feas_tol * (1.0 + std::abs(rhs[c]));
    if (!ok) continue;
    const double v = qp.objective(x);
    if (!out.optimum || v < *out.optimum) {
      out.optimum = v;
      out.argmin = x;
    }
  }
  return out;
}

}  // namespace cppc
