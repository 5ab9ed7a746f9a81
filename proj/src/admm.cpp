#include "cppc/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cppc/parallel.hpp"

namespace cppc {

const char* to_string(SolveResult::Status s) {
  switch (s) {
    case SolveResult::Status::Optimal: return "Optimal";
    case SolveResult::Status::Infeasible: return "Infeasible";
    case SolveResult::Status::Unbounded: return "Unbounded";
    case SolveResult::Status::MaxIters: return "MaxIters";
  }
  return "?";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Copy {
  enum class Kind { Psd, Nonneg, Free };
  Kind kind;
  Eigen::Index order = 0;  // Psd only
  std::vector<Eigen::Index> vars;
  Vector weight;
  Vector s, u;

  Vector gather(const Vector& v) const {
    Vector g(static_cast<Eigen::Index>(vars.size()));
    for (Eigen::Index t = 0; t < g.size(); ++t) g(t) = weight(t) * v(vars[static_cast<std::size_t>(t)]);
    return g;
  }
  void scatter_add(const Vector& w, Vector& out) const {
    for (Eigen::Index t = 0; t < w.size(); ++t) out(vars[static_cast<std::size_t>(t)]) += weight(t) * w(t);
  }

  Vector project(const Vector& w) const {
    switch (kind) {
      case Kind::Free: return w;
      case Kind::Nonneg: return w.cwiseMax(0.0);
      case Kind::Psd: break;
    }
    Matrix m(order, order);
    Eigen::Index t = 0;
    for (Eigen::Index i = 0; i < order; ++i)
      for (Eigen::Index j = i; j < order; ++j, ++t) m(i, j) = m(j, i) = i == j ? w(t) : w(t) / kSqrt2;
    const auto eig = jacobi_eigen(m);
    const Vector lam = eig.values.cwiseMax(0.0);
    const Matrix pm = eig.vectors * lam.asDiagonal() * eig.vectors.transpose();
    Vector out(w.size());
    t = 0;
    for (Eigen::Index i = 0; i < order; ++i)
      for (Eigen::Index j = i; j < order; ++j, ++t) out(t) = i == j ? pm(i, i) : kSqrt2 * 0.5 * (pm(i, j) + pm(j, i));
    return out;
  }
};

std::vector<Copy> build_copies(const ConicProgram& p) {
  std::vector<Copy> copies;
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    const auto& spec = p.block(b);
    Copy psd{Copy::Kind::Psd, static_cast<Eigen::Index>(spec.order), {}, {}, {}, {}};
    Copy nn{Copy::Kind::Nonneg, 0, {}, {}, {}, {}};
    std::vector<double> wp, wn;
    for (std::size_t i = 0; i < spec.order; ++i)
      for (std::size_t j = i; j < spec.order; ++j) {
        const auto var = static_cast<Eigen::Index>(p.entry_var(b, i, j));
        const double w = i == j ? 1.0 : kSqrt2;
        psd.vars.push_back(var);
        wp.push_back(w);
        if (spec.entry_nonneg(i, j)) {
          nn.vars.push_back(var);
          wn.push_back(w);
        }
      }
    psd.weight = Eigen::Map<Vector>(wp.data(), static_cast<Eigen::Index>(wp.size()));
    nn.weight = Eigen::Map<Vector>(wn.data(), static_cast<Eigen::Index>(wn.size()));
    if (spec.psd) copies.push_back(std::move(psd));
    if (!nn.vars.empty()) copies.push_back(std::move(nn));
  }
  Copy sc{Copy::Kind::Nonneg, 0, {}, {}, {}, {}};
  for (std::size_t s = 0; s < p.num_scalars(); ++s)
    if (p.scalar(s).nonneg) sc.vars.push_back(static_cast<Eigen::Index>(p.scalar_var(s)));
  if (!sc.vars.empty()) {
    sc.weight = Vector::Ones(static_cast<Eigen::Index>(sc.vars.size()));
    copies.push_back(std::move(sc));
  }
  // Every variable needs a copy, otherwise the diagonal D below is singular.
  std::vector<bool> covered(p.num_vars(), false);
  for (const auto& c : copies)
    for (auto v : c.vars) covered[static_cast<std::size_t>(v)] = true;
  Copy fr{Copy::Kind::Free, 0, {}, {}, {}, {}};
  for (std::size_t k = 0; k < p.num_vars(); ++k)
    if (!covered[k]) fr.vars.push_back(static_cast<Eigen::Index>(k));
  if (!fr.vars.empty()) {
    fr.weight = Vector::Ones(static_cast<Eigen::Index>(fr.vars.size()));
    copies.push_back(std::move(fr));
  }
  for (auto& c : copies) {
    c.s = Vector::Zero(static_cast<Eigen::Index>(c.vars.size()));
    c.u = c.s;
  }
  return copies;
}

}  // namespace

SolveResult solve(const ConicProgram& p, const SolveOptions& opts) {
  p.validate();
  const auto n = static_cast<Eigen::Index>(p.num_vars());

  Vector c = p.objective_vector();
  Matrix a = p.equality_matrix();
  Vector b = p.equality_vector();
  double cscale = 1.0;
  if (opts.scaling) {
    // Row equilibration and cost normalization. Column scaling is left out
    // because it would not preserve the PSD structure of a block.
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      const double nrm = a.row(r).lpNorm<Eigen::Infinity>();
      if (nrm > 0.0) {
        a.row(r) /= nrm;
        b(r) /= nrm;
      }
    }
    cscale = 1.0 / std::max(1.0, c.lpNorm<Eigen::Infinity>());
    c *= cscale;
  }

  SolveResult res;
  std::vector<Copy> copies = build_copies(p);
  Vector dinv = Vector::Zero(n);
  for (const auto& cp : copies)
    for (Eigen::Index t = 0; t < cp.weight.size(); ++t) dinv(cp.vars[static_cast<std::size_t>(t)]) += cp.weight(t) * cp.weight(t);
  dinv = dinv.cwiseInverse();

  const Matrix dat = dinv.asDiagonal() * a.transpose();  // D^-1 A^T
  Matrix pinv;
  if (a.rows() > 0) {
    const Matrix gram = a * dat;
    pinv = symmetric_pinv(gram, 1e-13);
    const Vector bproj = gram * (pinv * b);
    if ((bproj - b).lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>())) {
      res.status = SolveResult::Status::Infeasible;
      res.values = Vector::Zero(n);
      res.message = "affine equalities are inconsistent";
      return res;
    }
  }

  // Only worth threading when the eigen-projections dominate.
  double psd_work = 0.0;
  for (const auto& cp : copies)
    if (cp.kind == Copy::Kind::Psd) psd_work += std::pow(static_cast<double>(cp.order), 3);
  const bool threaded = psd_work >= 2e4 && copies.size() > 1;

  double rho = opts.rho;
  Vector v = Vector::Zero(n), mu = Vector::Zero(a.rows());
  Vector best_v = v;
  double best_score = std::numeric_limits<double>::infinity();
  double best_p = 0, best_d = 0, best_g = 0;
  const double alpha = opts.alpha;

  for (int it = 1; it <= opts.max_iters; ++it) {
    Vector r = Vector::Zero(n);
    for (const auto& cp : copies) cp.scatter_add(cp.s - cp.u, r);
    const Vector w = dinv.cwiseProduct(r - c / rho);
    if (a.rows() > 0) {
      mu = pinv * (a * w - b);
      v = w - dat * mu;
    } else {
      v = w;
    }

    auto step = [&](std::size_t k) {
      Copy& cp = copies[k];
      const Vector g = alpha * cp.gather(v) + (1.0 - alpha) * cp.s;
      const Vector snew = cp.project(g + cp.u);
      cp.u += g - snew;
      cp.s = snew;
    };
    if (threaded)
      parallel_for(copies.size(), step);
    else
      for (std::size_t k = 0; k < copies.size(); ++k) step(k);

    const bool last = it == opts.max_iters;
    if (it % opts.check_every != 0 && !last) continue;

    double rp = 0.0, gv_max = 0.0, s_max = 0.0;
    Vector zsum = Vector::Zero(n);
    for (const auto& cp : copies) {
      const Vector g = cp.gather(v);
      rp = std::max(rp, (g - cp.s).lpNorm<Eigen::Infinity>());
      gv_max = std::max(gv_max, g.lpNorm<Eigen::Infinity>());
      s_max = std::max(s_max, cp.s.lpNorm<Eigen::Infinity>());
      cp.scatter_add(rho * cp.u, zsum);
    }
    const double b_max = b.size() ? b.lpNorm<Eigen::Infinity>() : 0.0;
    const double eq = a.rows() ? (a * v - b).lpNorm<Eigen::Infinity>() : 0.0;
    const double norm_p = 1.0 + std::max({gv_max, s_max, b_max});
    const double rel_p = std::max(rp, eq) / norm_p;

    const Vector atl = a.rows() ? Vector(rho * (a.transpose() * mu)) : Vector::Zero(n);
    const double rd = (c + atl + zsum).lpNorm<Eigen::Infinity>();
    const double norm_d = 1.0 + std::max({c.lpNorm<Eigen::Infinity>(), atl.lpNorm<Eigen::Infinity>(), zsum.lpNorm<Eigen::Infinity>()});
    const double rel_d = rd / norm_d;

    const double pobj = c.dot(v);
    const double dobj = a.rows() ? -rho * b.dot(mu) : 0.0;
    const double rel_g = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    const double score = std::max({rel_p / opts.tol_primal, rel_d / opts.tol_dual, rel_g / opts.tol_gap});
    if (score < best_score) {
      best_score = score;
      best_v = v;
      best_p = rel_p;
      best_d = rel_d;
      best_g = rel_g;
    }
    res.iterations = it;
    if (score <= 1.0) {
      res.status = SolveResult::Status::Optimal;
      break;
    }

    if (opts.adaptive_rho && it % (5 * opts.check_every) == 0 && rel_d > 0.0) {
      const double ratio = std::sqrt((rel_p / opts.tol_primal) / (rel_d / opts.tol_dual));
      if (ratio > 5.0 || ratio < 0.2) {
        const double nr = std::clamp(rho * ratio, 1e-6, 1e6);
        for (auto& cp : copies) cp.u *= rho / nr;
        rho = nr;
      }
    }
  }

  res.values = best_v;
  res.primal_residual = best_p;
  res.dual_residual = best_d;
  res.gap = best_g;
  res.objective = p.objective_value(best_v);
  if (res.status != SolveResult::Status::Optimal) res.message = "iteration limit reached";
  return res;
}

}  // namespace cppc
