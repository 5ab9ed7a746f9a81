#include "cppc/completion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

#include "cppc/lp.hpp"

namespace cppc {

namespace {

struct BlockParts {
  Vector x;
  Matrix X;
  double y = 0.0;
  Vector z;
  double Y = 0.0;
};

BlockParts parts(const PartialMatrix& pm, std::size_t arm) {
  const auto n = static_cast<Eigen::Index>(pm.pattern().n1) - 1;
  BlockParts p;
  p.x = pm.nw().dense().row(0).tail(n).transpose();
  p.X = pm.nw().dense().bottomRightCorner(n, n);
  p.y = pm.cross(arm)(0, 0);
  p.z = pm.cross(arm).row(0).tail(n).transpose();
  p.Y = pm.arm_diag(arm)(0, 0);
  return p;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Real roots of a t^2 + b t + c, degenerate cases included. A slightly
// negative discriminant (rounding) counts as a double root.
std::vector<double> quadratic_roots(double a, double b, double c) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return {};
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) <= 1e-14 * scale) return {};
    return {-c / b};
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0 && disc >= -1e-12 * (b * b + std::abs(4.0 * a * c))) disc = 0.0;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a), -b / (2.0 * a)};
  // Numerically stable pair.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a, q != 0.0 ? c / q : -b / a};
  std::sort(r.begin(), r.end());
  return r;
}

// f in int(K*) for the rank-one construction: ones on orthant coordinates,
// zero on zero coordinates. Free coordinates leave int(K*) empty.
std::optional<Vector> interior_dual_point(const GroundCone& k) {
  const auto kinds = k.coordinate_kinds();
  Vector f(static_cast<Eigen::Index>(kinds.size()));
  for (std::size_t j = 0; j < kinds.size(); ++j) {
    if (kinds[j] == ConeFactor::Kind::Free) return std::nullopt;
    f(static_cast<Eigen::Index>(j)) = kinds[j] == ConeFactor::Kind::Orthant ? 1.0 : 0.0;
  }
  return f;
}

ConstraintData arm_data(const CompletionProblem& pr, std::vector<Vector> f, const std::vector<double>& g,
                        std::vector<double> d) {
  return ConstraintData::width_one(pr.k(), Vector::Zero(static_cast<Eigen::Index>(pr.n())), 0.0, std::move(f), g,
                                   std::move(d));
}

// Kernel basis of a symmetric PSD block, eigenvalues below tol * max(1, top).
Matrix psd_kernel(const Matrix& m, double tol) {
  const auto eig = jacobi_eigen(m);
  const double cut = tol * std::max(1.0, eig.largest_abs());
  Eigen::Index k = 0;
  while (k < eig.values.size() && eig.values(k) <= cut) ++k;
  return eig.vectors.leftCols(k);
}

class DataSearch {
 public:
  DataSearch(const CompletionProblem& pr, const FindDataOptions& opts) : pr_(pr), opts_(opts) {}

  // Returns true once fully verified data is found.
  bool offer(const std::vector<Vector>& f, const std::vector<double>& g, const std::vector<double>& d) {
    for (double gi : g)
      if (!(gi > 0.0) || !std::isfinite(gi)) return false;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!f[i].allFinite() || !std::isfinite(d[i])) return false;
    ConstraintData data = arm_data(pr_, f, g, d);
    if (!verify_block_constraints(pr_.pm(), data, opts_.residual_tol).ok) return false;
    if (check_conditions(data).all_pass()) {
      best_ = std::move(data);
      done_ = true;
      return true;
    }
    if (!fallback_) fallback_ = std::move(data);
    return false;
  }

  // Splits a kernel vector (-d, f, g) per arm; g > 0 and |d| normalized to 1.
  bool offer_vectors(const std::vector<Vector>& v) {
    std::vector<Vector> f;
    std::vector<double> g, d;
    const auto n = static_cast<Eigen::Index>(pr_.n());
    for (const auto& vi : v) {
      Vector w = vi;
      if (std::abs(w(n + 1)) < 1e-12 * std::max(1.0, w.lpNorm<Eigen::Infinity>())) return false;
      if (w(n + 1) < 0.0) w = -w;
      if (std::abs(w(0)) > 1e-12 * w.lpNorm<Eigen::Infinity>()) w /= std::abs(w(0));
      d.push_back(-w(0));
      f.push_back(w.segment(1, n));
      g.push_back(w(n + 1));
    }
    return offer(f, g, d);
  }

  bool done() const { return done_; }
  std::optional<ConstraintData> result() const { return done_ ? best_ : fallback_; }

 private:
  const CompletionProblem& pr_;
  const FindDataOptions& opts_;
  bool done_ = false;
  std::optional<ConstraintData> best_;
  std::optional<ConstraintData> fallback_;
};

void rank_one_path(const CompletionProblem& pr, DataSearch& search) {
  const auto f = interior_dual_point(pr.k());
  if (!f) return;
  for (std::size_t i = 0; i < pr.arms(); ++i) {
    const auto eig = jacobi_eigen(extract_block(pr.pm(), i).dense());
    const Eigen::Index m = eig.values.size();
    if (eig.values(m - 2) > 1e-9 * std::max(eig.values(m - 1), 0.0)) return;
  }
  std::vector<Vector> fs;
  std::vector<double> gs, ds;
  for (std::size_t i = 0; i < pr.arms(); ++i) {
    const auto p = parts(pr.pm(), i);
    const double t = f->dot(p.x) + p.y;
    if (!(t > 0.0)) return;
    fs.push_back(*f / t);
    gs.push_back(1.0 / t);
    ds.push_back(1.0);
  }
  search.offer(fs, gs, ds);
}

// Shared (d, f) with per-arm g_i in the joint kernel of all blocks, so
// condition iii holds with every multiplier equal to 1.
void common_kernel_path(const CompletionProblem& pr, DataSearch& search, double tol) {
  const auto n = static_cast<Eigen::Index>(pr.n());
  const auto s = static_cast<Eigen::Index>(pr.arms());
  const Eigen::Index cols = 1 + n + s;
  Matrix e = Matrix::Zero(s * (n + 2), cols);
  for (Eigen::Index i = 0; i < s; ++i) {
    const Matrix m = extract_block(pr.pm(), static_cast<std::size_t>(i)).dense();
    auto rows = e.middleRows(i * (n + 2), n + 2);
    rows.col(0) = -m.col(0);
    rows.middleCols(1, n) = m.middleCols(1, n);
    rows.col(1 + n + i) = m.col(n + 1);
  }
  Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullV);
  const Vector sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index k = 0; k < cols; ++k)
    if (k >= sv.size() || sv(k) <= cut) null_cols.push_back(k);
  if (null_cols.empty()) return;
  Matrix basis(cols, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t k = 0; k < null_cols.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(null_cols[k]);

  const auto kinds = pr.k().coordinate_kinds();
  for (bool interior_f : {true, false}) {
    std::vector<Vector> rows;
    for (Eigen::Index i = 0; i < s; ++i) rows.push_back(-basis.row(1 + n + i).transpose());
    if (interior_f)
      for (Eigen::Index j = 0; j < n; ++j)
        if (kinds[static_cast<std::size_t>(j)] == ConeFactor::Kind::Orthant) rows.push_back(-basis.row(1 + j).transpose());
    LinearProgram lp;
    const auto k = basis.cols();
    lp.c = Vector::Zero(k);
    lp.a_eq.resize(0, k);
    lp.b_eq.resize(0);
    lp.a_ub.resize(static_cast<Eigen::Index>(rows.size()), k);
    for (std::size_t r = 0; r < rows.size(); ++r) lp.a_ub.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    lp.b_ub = -Vector::Ones(static_cast<Eigen::Index>(rows.size()));
    lp.nonneg.assign(static_cast<std::size_t>(k), false);
    const auto res = solve_lp(lp);
    if (res.status != LpResult::Status::Optimal) continue;
    const Vector w = basis * res.x;
    std::vector<Vector> vs;
    for (Eigen::Index i = 0; i < s; ++i) {
      Vector v(n + 2);
      v << -w(0), w.segment(1, n), w(1 + n + i);  // w(0) holds d
      vs.push_back(v);
    }
    if (search.offer_vectors(vs)) return;
  }
}

void random_kernel_path(const CompletionProblem& pr, DataSearch& search, const FindDataOptions& opts) {
  std::vector<Matrix> kernels;
  for (std::size_t i = 0; i < pr.arms(); ++i) {
    kernels.push_back(psd_kernel(extract_block(pr.pm(), i).dense(), opts.kernel_tol));
    if (kernels.back().cols() == 0) return;
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < opts.restarts && !search.done(); ++r) {
    std::vector<Vector> vs;
    for (const auto& k : kernels) {
      Vector c(k.cols());
      for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = normal(rng);
      vs.push_back(k * c);
    }
    search.offer_vectors(vs);
  }
}

}  // namespace

CompletionProblem::CompletionProblem(PartialMatrix pm, GroundCone k, std::optional<ConstraintData> data)
    : original_(pm), scaled_(pm), k_(std::move(k)), data_(std::move(data)) {
  const auto& p = pm.pattern();
  if (p.n2 != 1) throw std::invalid_argument("CompletionProblem: arms must have width one");
  if (k_.dim() + 1 != p.n1) throw std::invalid_argument("CompletionProblem: K must have dimension n1 - 1");
  scale_ = pm.nw()(0, 0);
  if (!(scale_ > 0.0)) throw std::invalid_argument("CompletionProblem: NW corner must be positive");
  scaled_ = pm.scaled(1.0 / scale_);
  if (data_) {
    data_->validate();
    if (data_->arms() != p.arms || data_->nx() != k_.dim())
      throw std::invalid_argument("CompletionProblem: constraint data does not match the pattern");
    for (const auto& ki : data_->ki)
      if (ki.dim() != 1) throw std::invalid_argument("CompletionProblem: every K_i must be one-dimensional");
  }
}

GroundCone CompletionProblem::block_cone() const {
  return GroundCone::product({GroundCone::orthant(1), k_, GroundCone::orthant(1)});
}

GroundCone CompletionProblem::full_cone() const {
  return GroundCone::product({GroundCone::orthant(1), k_, GroundCone::orthant(arms())});
}

BlockConstraintReport verify_block_constraints(const PartialMatrix& pm, const ConstraintData& data, double tol) {
  data.validate();
  const auto& p = pm.pattern();
  if (p.n2 != 1) throw std::invalid_argument("verify_block_constraints: arms must have width one");
  if (data.arms() != p.arms || data.nx() + 1 != p.n1)
    throw std::invalid_argument("verify_block_constraints: data does not match the pattern");
  BlockConstraintReport r;
  r.tol = tol;
  r.ok = true;
  const auto b0 = parts(pm, 0);
  r.f0.linear = data.f0.dot(b0.x) - data.d0;
  r.f0.quadratic = data.f0.dot(b0.X * data.f0) - data.d0 * data.d0;
  {
    const double s = std::max({1.0, std::abs(data.d0), data.f0.lpNorm<Eigen::Infinity>()});
    if (std::abs(r.f0.linear) > tol * s || std::abs(r.f0.quadratic) > tol * s * s) r.ok = false;
  }
  for (std::size_t i = 0; i < p.arms; ++i) {
    if (data.g[i].size() != 1) throw std::invalid_argument("verify_block_constraints: g_i must be scalar");
    const auto b = parts(pm, i);
    const Vector& f = data.f[i];
    const double g = data.g[i](0), d = data.d[i];
    ResidualPair rp;
    rp.linear = f.dot(b.x) + g * b.y - d;
    rp.quadratic = f.dot(b.X * f) + 2.0 * g * f.dot(b.z) + g * g * b.Y - d * d;
    const double s = std::max({1.0, std::abs(d), f.lpNorm<Eigen::Infinity>(), std::abs(g)});
    if (std::abs(rp.linear) > tol * s || std::abs(rp.quadratic) > tol * s * s) r.ok = false;
    r.arms.push_back(rp);
  }
  return r;
}

const char* to_string(CompletabilityCertificate::Verdict v) {
  return v == CompletabilityCertificate::Verdict::Certified ? "Certified" : "NoCertificate";
}

SmallDimensionReport small_dimension_path(const CompletionProblem& pr) {
  SmallDimensionReport rep;
  const std::size_t n = pr.n();
  if (n < 1 || n > 2) {
    rep.notes.push_back("closed form needs n <= 2");
    return rep;
  }
  rep.applicable = true;
  for (std::size_t i = 0; i < pr.arms(); ++i) {
    const auto b = parts(pr.pm(), i);
    std::vector<double> roots;
    std::vector<ArmCandidate> cands;
    const double xn2 = b.x.squaredNorm();
    auto push = [&](const Vector& f, double g) {
      if (g > 0.0 && f.allFinite()) cands.push_back({f, g});
    };
    if (n == 1) {
      if (xn2 > 0.0) {
        // f = (1 - g y) / x turns the quadratic equation into one in g.
        const double x = b.x(0), X = b.X(0, 0), z = b.z(0);
        const double c2 = X * b.y * b.y / (x * x) - 2.0 * z * b.y / x + b.Y;
        const double c1 = -2.0 * X * b.y / (x * x) + 2.0 * z / x;
        const double c0 = X / (x * x) - 1.0;
        roots = quadratic_roots(c2, c1, c0);
        for (double g : roots) push(Vector::Constant(1, (1.0 - g * b.y) / x), g);
        if (std::abs(c2) + std::abs(c1) + std::abs(c0) <= 1e-14) {
          rep.notes.push_back("arm " + std::to_string(i + 1) + ": every g solves the equations");
          for (double g : {0.5, 1.0, 2.0}) push(Vector::Constant(1, (1.0 - g * b.y) / x), g);
        }
      } else if (b.y > 0.0) {
        // x = 0: g = 1/y, then X f^2 + 2 g z f + g^2 Y - 1 = 0.
        const double g = 1.0 / b.y;
        roots.push_back(g);
        for (double f : quadratic_roots(b.X(0, 0), 2.0 * g * b.z(0), g * g * b.Y - 1.0)) push(Vector::Constant(1, f), g);
      } else {
        rep.notes.push_back("arm " + std::to_string(i + 1) + ": x = 0 and y = 0 leave 0 = 1");
      }
    } else if (xn2 > 0.0) {
      // f = (1 - g y) p + t w with p = x / |x|^2 and w orthogonal to x. For
      // fixed g the equation is quadratic in t; real t exists iff the
      // discriminant, itself quadratic in g, is nonnegative.
      const Vector p = b.x / xn2;
      Vector w(2);
      w << -b.x(1), b.x(0);
      w /= std::sqrt(xn2);
      const double a = w.dot(b.X * w);
      auto bt = [&](double g) { return 2.0 * (1.0 - g * b.y) * p.dot(b.X * w) + 2.0 * g * w.dot(b.z); };
      auto ct = [&](double g) {
        const double s = 1.0 - g * b.y;
        return s * s * p.dot(b.X * p) + 2.0 * g * s * p.dot(b.z) + g * g * b.Y - 1.0;
      };
      auto f_of = [&](double g, double t) { return Vector((1.0 - g * b.y) * p + t * w); };
      if (a > 1e-12 * std::max(1.0, b.X.norm())) {
        auto disc = [&](double g) { return bt(g) * bt(g) - 4.0 * a * ct(g); };
        // Exact quadratic through three samples.
        const double q0 = disc(0.0), qp = disc(1.0), qm = disc(-1.0);
        const double c2 = 0.5 * (qp + qm) - q0, c1 = 0.5 * (qp - qm);
        roots = quadratic_roots(c2, c1, q0);
        std::vector<double> gs;
        for (double r : roots) gs.push_back(r);
        std::vector<double> probe = roots;
        probe.push_back(0.0);
        std::sort(probe.begin(), probe.end());
        for (std::size_t k = 0; k + 1 < probe.size(); ++k) gs.push_back(0.5 * (probe[k] + probe[k + 1]));
        gs.push_back(probe.back() + 1.0);
        gs.push_back(2.0 * probe.back() + 1.0);
        for (double g : gs) {
          if (!(g > 0.0)) continue;
          double dq = disc(g);
          if (dq < 0.0 && dq > -1e-12) dq = 0.0;
          if (dq < 0.0) continue;
          for (double t : quadratic_roots(a, bt(g), ct(g))) push(f_of(g, t), g);
        }
      } else {
        for (double g : {0.25, 0.5, 1.0, 2.0, 4.0}) {
          const double bb = bt(g);
          if (std::abs(bb) > 1e-12) push(f_of(g, -ct(g) / bb), g);
        }
      }
    } else if (b.y > 0.0) {
      const double g = 1.0 / b.y;
      roots.push_back(g);
      for (int k = 0; k < 8; ++k) {
        const double th = M_PI * k / 8.0;
        Vector dir(2);
        dir << std::cos(th), std::sin(th);
        for (double r : quadratic_roots(dir.dot(b.X * dir), 2.0 * g * dir.dot(b.z), g * g * b.Y - 1.0)) push(r * dir, g);
      }
    } else {
      rep.notes.push_back("arm " + std::to_string(i + 1) + ": x = 0 and y = 0 leave 0 = 1");
    }
    if (cands.empty()) rep.notes.push_back("arm " + std::to_string(i + 1) + ": no root with g > 0");
    rep.g_roots.push_back(std::move(roots));
    rep.candidates.push_back(std::move(cands));
  }
  return rep;
}

std::optional<ConstraintData> find_data(const CompletionProblem& pr, const FindDataOptions& opts) {
  DataSearch search(pr, opts);
  rank_one_path(pr, search);
  if (!search.done()) common_kernel_path(pr, search, opts.kernel_tol);
  if (!search.done()) {
    const auto rep = small_dimension_path(pr);
    if (rep.applicable) {
      std::size_t combos = 1;
      for (const auto& c : rep.candidates) combos *= c.size();
      combos = std::min<std::size_t>(combos, 4096);
      for (std::size_t k = 0; k < combos && !search.done(); ++k) {
        std::vector<Vector> fs;
        std::vector<double> gs, ds;
        std::size_t rem = k;
        for (const auto& c : rep.candidates) {
          const auto& pick = c[rem % c.size()];
          rem /= c.size();
          fs.push_back(pick.f);
          gs.push_back(pick.g);
          ds.push_back(1.0);
        }
        search.offer(fs, gs, ds);
      }
    }
  }
  if (!search.done()) random_kernel_path(pr, search, opts);
  return search.result();
}

CompletabilityCertificate certify_completable(const CompletionProblem& pr, const FindDataOptions& opts) {
  CompletabilityCertificate cert;
  if (pr.data()) {
    cert.data = pr.data();
    cert.data_source = "given";
  } else {
    cert.data = find_data(pr, opts);
    cert.data_source = "search";
  }
  for (std::size_t i = 0; i < pr.arms(); ++i) cert.blocks.push_back(is_cpp(extract_block(pr.pm(), i), pr.block_cone()));
  if (!cert.data) {
    cert.reason = "no constraint data satisfies the block equations with g_i > 0";
    return cert;
  }
  const auto& data = *cert.data;
  cert.residuals = verify_block_constraints(pr.pm(), data, opts.residual_tol);
  cert.conditions = check_conditions(data);

  std::string reason;
  auto fail = [&](const std::string& why) {
    if (reason.empty()) reason = why;
  };
  if (!(data.k0 == pr.k())) fail("data cone K0 differs from K");
  if (!cert.residuals->ok) {
    const auto& r = *cert.residuals;
    if (std::abs(r.f0.linear) > 0.0 || std::abs(r.f0.quadratic) > 0.0) {
      const double s = std::max({1.0, std::abs(data.d0), data.f0.lpNorm<Eigen::Infinity>()});
      if (std::abs(r.f0.linear) > r.tol * s) fail("f0 linear residual " + fmt(r.f0.linear));
      if (std::abs(r.f0.quadratic) > r.tol * s * s) fail("f0 quadratic residual " + fmt(r.f0.quadratic));
    }
    for (std::size_t i = 0; i < r.arms.size(); ++i) {
      const double s = std::max({1.0, std::abs(data.d[i]), data.f[i].lpNorm<Eigen::Infinity>(), std::abs(data.g[i](0))});
      if (std::abs(r.arms[i].linear) > r.tol * s) fail("block " + std::to_string(i + 1) + " linear residual " + fmt(r.arms[i].linear));
      if (std::abs(r.arms[i].quadratic) > r.tol * s * s)
        fail("block " + std::to_string(i + 1) + " quadratic residual " + fmt(r.arms[i].quadratic));
    }
  }
  for (std::size_t i = 0; i < cert.blocks.size(); ++i)
    if (!cert.blocks[i].member()) fail("block " + std::to_string(i + 1) + " not verified in CPP: " + cert.blocks[i].reason);
  const auto& cond = *cert.conditions;
  for (std::size_t i = 0; i < cond.cond_i.size(); ++i)
    if (!cond.cond_i[i]) fail("condition i fails for arm " + std::to_string(i + 1));
  if (cond.boundedness.status != Boundedness::Bounded)
    fail(std::string("condition ii: ") + to_string(cond.boundedness.status) + " (" + cond.boundedness.reason + ")");
  if (!cond.cond_iii.certificate) fail("condition iii: no set-containment certificate");

  if (reason.empty()) {
    cert.verdict = CompletabilityCertificate::Verdict::Certified;
    cert.reason = "all conditions verified";
  } else {
    cert.reason = reason;
  }
  return cert;
}

bool reverify_certificate(const CompletionProblem& pr, const CompletabilityCertificate& cert) {
  if (!cert.certified() || !cert.data || !cert.conditions || !cert.conditions->cond_iii.certificate) return false;
  const auto& data = *cert.data;
  if (!(data.k0 == pr.k())) return false;
  if (!verify_block_constraints(pr.pm(), data, cert.residuals ? cert.residuals->tol : kDefaultAgreementTol).ok) return false;
  for (std::size_t i = 0; i < pr.arms(); ++i)
    if (!is_cpp(extract_block(pr.pm(), i), pr.block_cone()).member()) return false;
  for (bool b : check_cond_i(data))
    if (!b) return false;
  if (check_boundedness(data).status != Boundedness::Bounded) return false;
  return verify_cond_iii(data, *cert.conditions->cond_iii.certificate);
}

CompletionResult complete_numeric(const CompletionProblem& pr, const CompleteOptions& opts) {
  CompletionResult out;
  const PartialMatrix& pm = pr.pm();
  const std::size_t order = pm.pattern().total_order();
  const auto kinds = pr.full_cone().coordinate_kinds();
  BlockSpec spec;
  spec.order = order;
  for (auto k : kinds) spec.sign_mask.push_back(k != ConeFactor::Kind::Free);
  ConicProgram prog;
  const auto blk = prog.add_block(spec);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = i; j < order; ++j)
      if (auto v = pm.entry(i, j)) {
        LinearForm f;
        f.add(prog.entry_var(blk, i, j), 1.0);
        prog.add_equality(std::move(f), *v);
      }
  SolveResult sr = solve(prog, opts.solver);
  out.solve = sr;
  if (sr.status != SolveResult::Status::Optimal) {
    std::ostringstream os;
    os << "solver stopped with " << to_string(sr.status) << " after " << sr.iterations
       << " iterations (primal " << sr.primal_residual << ", dual " << sr.dual_residual << ")";
    out.message = os.str();
    return out;
  }
  Matrix full = prog.block_value(sr.values, blk).dense();
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j)
      if (auto v = pm.entry(i, j)) full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
  // Unspecified entries pair two arm coordinates and must be nonnegative.
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j)
      if (!pm.entry(i, j)) {
        double& e = full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (e < 0.0 && e > -opts.dnn_tol) e = 0.0;
      }
  const SymMatrix scaled_full(full);
  out.membership = is_cpp(scaled_full, pr.full_cone(), opts.dnn_tol);
  if (out.membership.verdict == MembershipVerdict::Verdict::NotMember) {
    out.message = "solver point fails verification: " + out.membership.reason;
    return out;
  }
  const double c = pr.scale();
  if (out.membership.factor) out.membership.factor = std::sqrt(c) * *out.membership.factor;
  Completion comp{SymMatrix(Matrix(c * full)), std::make_shared<const PartialMatrix>(pr.original())};
  if (!agrees(comp.full, pr.original(), kDefaultAgreementTol * std::max(1.0, c))) {
    out.message = "completion does not agree with the partial matrix";
    return out;
  }
  out.completion = std::move(comp);
  out.message = out.membership.reason;
  return out;
}

CompletionResult complete_rank_one(const CompletionProblem& pr, double rank_tol) {
  CompletionResult out;
  const PartialMatrix& pm = pr.pm();
  for (std::size_t i = 0; i < pr.arms(); ++i) {
    const auto eig = jacobi_eigen(extract_block(pm, i).dense());
    const Eigen::Index m = eig.values.size();
    if (eig.values(m - 2) > rank_tol * std::max(eig.values(m - 1), 0.0)) {
      out.message = "block " + std::to_string(i + 1) + " has rank above one";
      return out;
    }
  }
  const auto n = static_cast<Eigen::Index>(pr.n());
  const auto s = static_cast<Eigen::Index>(pr.arms());
  Vector z(1 + n + s);
  z(0) = 1.0;
  z.segment(1, n) = pm.nw().dense().row(0).tail(n).transpose();
  for (Eigen::Index i = 0; i < s; ++i) z(1 + n + i) = pm.cross(static_cast<std::size_t>(i))(0, 0);
  if (!cone_contains(pr.full_cone(), z)) {
    out.message = "generator z is not in R_+ x K x R_+^S";
    return out;
  }
  const double c = pr.scale();
  const Vector zc = std::sqrt(c) * z;
  Completion comp{SymMatrix(Matrix(zc * zc.transpose())), std::make_shared<const PartialMatrix>(pr.original())};
  if (!agrees(comp.full, pr.original(), 1e-9 * std::max(1.0, c))) {
    out.message = "z z^T does not reproduce the specified entries";
    return out;
  }
  out.membership.verdict = MembershipVerdict::Verdict::Member;
  out.membership.factor = Matrix(zc);
  out.membership.reason = "rank-one factor z";
  out.completion = std::move(comp);
  out.message = "rank-one completion";
  return out;
}

OracleResult brute_force_completion_oracle(const PartialMatrix& pm, const OracleOptions& opts) {
  const auto& p = pm.pattern();
  const std::size_t n = p.total_order();
  std::vector<std::pair<std::size_t, std::size_t>> free_entries;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!p.is_specified(i, j)) free_entries.emplace_back(i, j);
  if (free_entries.size() > 3) throw std::invalid_argument("brute_force_completion_oracle: more than three unspecified entries");

  const Matrix base = pm.zero_filled().dense();
  const std::size_t k = free_entries.size();
  std::vector<double> hi(k);
  for (std::size_t t = 0; t < k; ++t) {
    const auto [i, j] = free_entries[t];
    hi[t] = opts.hi > 0.0 ? opts.hi
                          : std::sqrt(std::max(0.0, base(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) *
                                                        base(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
  }
  auto fill = [&](const std::vector<double>& vals) {
    Matrix m = base;
    for (std::size_t t = 0; t < k; ++t) {
      const auto i = static_cast<Eigen::Index>(free_entries[t].first), j = static_cast<Eigen::Index>(free_entries[t].second);
      m(i, j) = m(j, i) = vals[t];
    }
    return m;
  };
  auto score = [&](const std::vector<double>& vals) { return jacobi_eigen(fill(vals)).values(0); };

  std::vector<double> best(k, 0.0), cur(k, 0.0);
  double best_val = score(best);
  const int steps = std::max(2, opts.steps);
  std::size_t total = 1;
  for (std::size_t t = 0; t < k; ++t) total *= static_cast<std::size_t>(steps);
  for (std::size_t idx = 0; idx < total && k > 0; ++idx) {
    std::size_t rem = idx;
    for (std::size_t t = 0; t < k; ++t) {
      cur[t] = hi[t] * static_cast<double>(rem % static_cast<std::size_t>(steps)) / (steps - 1);
      rem /= static_cast<std::size_t>(steps);
    }
    const double v = score(cur);
    if (v > best_val) {
      best_val = v;
      best = cur;
    }
  }
  // Pattern search from the best grid point.
  std::vector<double> step(k);
  for (std::size_t t = 0; t < k; ++t) step[t] = hi[t] / (steps - 1);
  for (int it = 0; it < opts.refine_iters && k > 0; ++it) {
    bool moved = false;
    for (std::size_t t = 0; t < k; ++t)
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> trial = best;
        trial[t] = std::clamp(trial[t] + sgn * step[t], 0.0, hi[t]);
        const double v = score(trial);
        if (v > best_val) {
          best_val = v;
          best = trial;
          moved = true;
        }
      }
    if (!moved) {
      double mx = 0.0;
      for (auto& s : step) mx = std::max(mx, s *= 0.5);
      if (mx < 1e-15) break;
    }
  }

  OracleResult out;
  out.best_min_eigenvalue = best_val;
  out.best_entries = best;
  const Matrix m = fill(best);
  const double thresh = -1e-9 * std::max(1.0, m.norm());
  if (best_val < thresh || m.minCoeff() < thresh) return out;
  std::vector<Matrix> off;
  const auto n2 = static_cast<Eigen::Index>(p.n2);
  for (std::size_t a = 0; a < p.arms; ++a)
    for (std::size_t b = a + 1; b < p.arms; ++b)
      off.push_back(m.block(static_cast<Eigen::Index>(p.n1 + a * p.n2), static_cast<Eigen::Index>(p.n1 + b * p.n2), n2, n2));
  out.completion = assemble_completion(pm, off);
  return out;
}

}  // namespace cppc
