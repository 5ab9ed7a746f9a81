#include "cppc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cppc/lp.hpp"

namespace cppc {

namespace {

constexpr double kRoundoff = 1e-12;

bool is_zero(const Vector& v) { return v.size() == 0 || v.lpNorm<Eigen::Infinity>() == 0.0; }

bool has_orthant(const GroundCone& k) {
  for (const auto& f : k.factors())
    if (f.kind == ConeFactor::Kind::Orthant) return true;
  return false;
}

}  // namespace

void ConstraintData::validate() const {
  const auto n = static_cast<Eigen::Index>(k0.dim());
  if (f0.size() != n) throw std::invalid_argument("ConstraintData: f0 has wrong length");
  if (g.size() != f.size() || d.size() != f.size() || ki.size() != f.size())
    throw std::invalid_argument("ConstraintData: f, g, d and K_i must all have S entries");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].size() != n) throw std::invalid_argument("ConstraintData: f_i has wrong length");
    if (g[i].size() != static_cast<Eigen::Index>(ki[i].dim()))
      throw std::invalid_argument("ConstraintData: g_i does not match K_i");
    if (!f[i].allFinite() || !g[i].allFinite() || !std::isfinite(d[i]))
      throw std::invalid_argument("ConstraintData: non-finite entry");
  }
  if (!f0.allFinite() || !std::isfinite(d0)) throw std::invalid_argument("ConstraintData: non-finite entry");
  if (is_zero(f0) && d0 != 0.0) throw std::invalid_argument("ConstraintData: f0 = 0 requires d0 = 0");
}

ConstraintData ConstraintData::width_one(GroundCone k0, Vector f0, double d0, std::vector<Vector> f,
                                         const std::vector<double>& g, std::vector<double> d) {
  ConstraintData out;
  out.k0 = std::move(k0);
  out.f0 = std::move(f0);
  out.d0 = d0;
  out.f = std::move(f);
  out.d = std::move(d);
  for (double gi : g) {
    out.g.push_back(Vector::Constant(1, gi));
    out.ki.push_back(GroundCone::orthant(1));
  }
  out.validate();
  return out;
}

const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "Bounded";
    case Boundedness::NotBounded: return "NotBounded";
    case Boundedness::Inconclusive: return "Inconclusive";
  }
  return "?";
}

bool ConditionReport::all_pass() const {
  return std::all_of(cond_i.begin(), cond_i.end(), [](bool b) { return b; }) &&
         boundedness.status == Boundedness::Bounded && cond_iii.certificate.has_value();
}

std::vector<bool> check_cond_i(const ConstraintData& data) {
  data.validate();
  std::vector<bool> out;
  for (std::size_t i = 0; i < data.arms(); ++i) out.push_back(interior_dual_contains(data.ki[i], data.g[i]));
  return out;
}

bool check_Fi_bounded_sufficient(const ConstraintData& data, std::size_t i) {
  data.validate();
  if (i > data.arms()) throw std::out_of_range("check_Fi_bounded_sufficient: index out of range");
  if (i == 0) return !is_zero(data.f0) && interior_dual_contains(data.k0, data.f0) && data.d0 >= 0.0;
  // The y-part of F_i is bounded only when g_i is interior as well.
  return interior_dual_contains(data.k0, data.f[i - 1]) && data.d[i - 1] >= 0.0 &&
         interior_dual_contains(data.ki[i - 1], data.g[i - 1]);
}

BoundednessResult check_boundedness(const ConstraintData& data) {
  data.validate();
  for (std::size_t i = 0; i <= data.arms(); ++i)
    if (check_Fi_bounded_sufficient(data, i))
      return {Boundedness::Bounded, i == 0 ? "F_0 is bounded" : "F_" + std::to_string(i) + " is bounded"};

  const auto cond_i = check_cond_i(data);
  for (std::size_t i = 0; i < cond_i.size(); ++i)
    if (!cond_i[i]) return {Boundedness::Inconclusive, "g_" + std::to_string(i + 1) + " is not interior to K_i*"};
  const bool orthant_case =
      data.k0.within_orthant() || std::all_of(data.ki.begin(), data.ki.end(), [](const GroundCone& k) { return k.within_orthant(); });
  if (!orthant_case) return {Boundedness::Inconclusive, "neither K0 nor every K_i lies in an orthant"};

  // Rows of F_x: f0^T x = d0, zero coordinates of K0, and one row per arm.
  // With g_i interior, an arm is an inequality if K_i has an orthant part
  // and an equality if K_i is the zero cone.
  const auto n = static_cast<Eigen::Index>(data.nx());
  const auto kinds = data.k0.coordinate_kinds();
  std::vector<Vector> eq_rows, ub_rows;
  std::vector<double> eq_rhs, ub_rhs;
  eq_rows.push_back(data.f0);
  eq_rhs.push_back(data.d0);
  for (Eigen::Index j = 0; j < n; ++j)
    if (kinds[static_cast<std::size_t>(j)] == ConeFactor::Kind::Zero) {
      eq_rows.push_back(Vector::Unit(n, j));
      eq_rhs.push_back(0.0);
    }
  for (std::size_t i = 0; i < data.arms(); ++i) {
    if (has_orthant(data.ki[i])) {
      ub_rows.push_back(data.f[i]);
      ub_rhs.push_back(data.d[i]);
    } else {
      eq_rows.push_back(data.f[i]);
      eq_rhs.push_back(data.d[i]);
    }
  }
  LinearProgram lp;
  lp.c = Vector::Zero(n);
  lp.a_eq.resize(static_cast<Eigen::Index>(eq_rows.size()), n);
  lp.b_eq.resize(static_cast<Eigen::Index>(eq_rows.size()));
  for (std::size_t r = 0; r < eq_rows.size(); ++r) {
    lp.a_eq.row(static_cast<Eigen::Index>(r)) = eq_rows[r].transpose();
    lp.b_eq(static_cast<Eigen::Index>(r)) = eq_rhs[r];
  }
  lp.a_ub.resize(static_cast<Eigen::Index>(ub_rows.size()), n);
  lp.b_ub.resize(static_cast<Eigen::Index>(ub_rows.size()));
  for (std::size_t r = 0; r < ub_rows.size(); ++r) {
    lp.a_ub.row(static_cast<Eigen::Index>(r)) = ub_rows[r].transpose();
    lp.b_ub(static_cast<Eigen::Index>(r)) = ub_rhs[r];
  }
  for (auto k : kinds) lp.nonneg.push_back(k != ConeFactor::Kind::Free);

  const auto feas = solve_lp(lp);
  if (feas.status == LpResult::Status::Infeasible) return {Boundedness::Bounded, "F_x is empty"};
  if (feas.status != LpResult::Status::Optimal) return {Boundedness::Inconclusive, "feasibility LP did not finish"};

  // Recession cone: same rows with zero right-hand sides.
  LinearProgram rec = lp;
  rec.b_eq.setZero();
  rec.b_ub.setZero();
  auto probe = [&](const Vector& obj, const Matrix& extra_ub, const Vector& extra_rhs) -> std::optional<double> {
    LinearProgram q = rec;
    q.c = -obj;
    Matrix a(q.a_ub.rows() + extra_ub.rows(), n);
    a << q.a_ub, extra_ub;
    Vector b(q.b_ub.size() + extra_rhs.size());
    b << q.b_ub, extra_rhs;
    q.a_ub = a;
    q.b_ub = b;
    const auto r = solve_lp(q);
    if (r.status != LpResult::Status::Optimal) return std::nullopt;
    return -r.objective;
  };
  if (data.k0.within_orthant()) {
    const Vector ones = Vector::Ones(n);
    const auto best = probe(ones, ones.transpose(), Vector::Ones(1));
    if (!best) return {Boundedness::Inconclusive, "recession LP did not finish"};
    if (*best > 1e-9) return {Boundedness::NotBounded, "recession cone contains a nonzero direction"};
    return {Boundedness::Bounded, "recession cone is {0}"};
  }
  // Free coordinates: probe each coordinate in both directions inside a box.
  Matrix box(2 * n, n);
  box << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  const Vector box_rhs = Vector::Ones(2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (double s : {1.0, -1.0}) {
      const auto best = probe(s * Vector::Unit(n, j), box, box_rhs);
      if (!best) return {Boundedness::Inconclusive, "recession LP did not finish"};
      if (*best > 1e-9) return {Boundedness::NotBounded, "recession cone contains a nonzero direction"};
    }
  return {Boundedness::Bounded, "recession cone is {0}"};
}

std::optional<double> scalar_lambda_feasible(const Vector& f_ref, double d_ref, const Vector& f, double d,
                                             const GroundCone& k0, LambdaSign sign, double slack) {
  const auto n = static_cast<Eigen::Index>(k0.dim());
  if (f_ref.size() != n || f.size() != n) throw std::invalid_argument("scalar_lambda_feasible: dimension mismatch");
  double lo = sign == LambdaSign::Nonneg ? 0.0 : -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool ok = true;
  // lambda * a >= b - slack
  auto at_least = [&](double a, double b) {
    if (a > 0.0)
      lo = std::max(lo, (b - slack) / a);
    else if (a < 0.0)
      hi = std::min(hi, (b - slack) / a);
    else if (b > slack + kRoundoff)
      ok = false;
  };
  // |lambda * a - b| <= slack
  auto equal_to = [&](double a, double b) {
    at_least(a, b);
    at_least(-a, -b);
  };
  const auto kinds = k0.coordinate_kinds();
  for (Eigen::Index j = 0; j < n; ++j) {
    switch (kinds[static_cast<std::size_t>(j)]) {
      case ConeFactor::Kind::Orthant: at_least(f_ref(j), f(j)); break;
      case ConeFactor::Kind::Free: equal_to(f_ref(j), f(j)); break;
      case ConeFactor::Kind::Zero: break;
    }
  }
  at_least(-d_ref, -d);
  if (!ok || lo > hi) return std::nullopt;

  double lam = 0.0;
  if (lo <= 1.0 && 1.0 <= hi)
    lam = 1.0;
  else if (std::isfinite(lo))
    lam = lo;
  else if (std::isfinite(hi))
    lam = hi;

  // Re-evaluate the inequalities as stated.
  const double scale = 1.0 + std::abs(lam) * (f_ref.lpNorm<Eigen::Infinity>() + std::abs(d_ref)) +
                       f.lpNorm<Eigen::Infinity>() + std::abs(d);
  const double tol = slack + kRoundoff * scale;
  if (lam * d_ref - d > tol) return std::nullopt;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = lam * f_ref(j) - f(j);
    const auto k = kinds[static_cast<std::size_t>(j)];
    if (k == ConeFactor::Kind::Orthant && r < -tol) return std::nullopt;
    if (k == ConeFactor::Kind::Free && std::abs(r) > tol) return std::nullopt;
  }
  return lam;
}

CondIIIResult check_cond_iii(const ConstraintData& data) {
  data.validate();
  CondIIIResult out;
  const std::size_t s = data.arms();
  const bool f0_zero = is_zero(data.f0) && data.d0 == 0.0;

  if (!f0_zero) {
    CondIIICertificate cert{0, {}, LambdaSign::Free};
    for (std::size_t i = 0; i < s; ++i) {
      const auto lam = scalar_lambda_feasible(data.f0, data.d0, data.f[i], data.d[i], data.k0, LambdaSign::Free);
      if (!lam) {
        out.diagnostics.push_back("pivot F_0: no multiplier for arm " + std::to_string(i + 1));
        break;
      }
      cert.lambda.push_back(*lam);
    }
    if (cert.lambda.size() == s) {
      out.certificate = cert;
      return out;
    }
  } else {
    out.diagnostics.push_back("pivot F_0 skipped: f0 = 0 and d0 = 0");
  }

  if (!f0_zero) {
    out.diagnostics.push_back("arm pivots need f0 = 0 and d0 = 0");
    return out;
  }
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return data.d[a] > data.d[b]; });
  for (std::size_t p : order) {
    CondIIICertificate cert{p + 1, {}, LambdaSign::Nonneg};
    for (std::size_t i = 0; i < s; ++i) {
      const auto lam =
          scalar_lambda_feasible(data.f[p], data.d[p], data.f[i], data.d[i], data.k0, LambdaSign::Nonneg);
      if (!lam) {
        out.diagnostics.push_back("pivot F_" + std::to_string(p + 1) + ": no multiplier for arm " + std::to_string(i + 1));
        break;
      }
      cert.lambda.push_back(*lam);
    }
    if (cert.lambda.size() == s) {
      out.certificate = cert;
      return out;
    }
  }
  return out;
}

bool verify_cond_iii(const ConstraintData& data, const CondIIICertificate& cert) {
  data.validate();
  if (cert.lambda.size() != data.arms() || cert.pivot > data.arms()) return false;
  const bool f0_zero = is_zero(data.f0) && data.d0 == 0.0;
  if (cert.pivot != 0 && !f0_zero) return false;
  const Vector& fr = cert.pivot == 0 ? data.f0 : data.f[cert.pivot - 1];
  const double dr = cert.pivot == 0 ? data.d0 : data.d[cert.pivot - 1];
  const auto kinds = data.k0.coordinate_kinds();
  for (std::size_t i = 0; i < data.arms(); ++i) {
    const double lam = cert.lambda[i];
    if (cert.sign == LambdaSign::Nonneg && lam < 0.0) return false;
    if (cert.pivot != 0 && cert.sign != LambdaSign::Nonneg) return false;
    const double scale = 1.0 + std::abs(lam) * (fr.lpNorm<Eigen::Infinity>() + std::abs(dr)) +
                         data.f[i].lpNorm<Eigen::Infinity>() + std::abs(data.d[i]);
    const double tol = kRoundoff * scale;
    if (lam * dr - data.d[i] > tol) return false;
    for (Eigen::Index j = 0; j < fr.size(); ++j) {
      const double r = lam * fr(j) - data.f[i](j);
      const auto k = kinds[static_cast<std::size_t>(j)];
      if (k == ConeFactor::Kind::Orthant && r < -tol) return false;
      if (k == ConeFactor::Kind::Free && std::abs(r) > tol) return false;
    }
  }
  return true;
}

ConditionReport check_conditions(const ConstraintData& data) {
  ConditionReport r;
  r.cond_i = check_cond_i(data);
  r.boundedness = check_boundedness(data);
  r.cond_iii = check_cond_iii(data);
  return r;
}

}  // namespace cppc
