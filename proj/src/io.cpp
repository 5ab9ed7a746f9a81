#include "cppc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cppc {

namespace {

using Idx = Eigen::Index;

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected a JSON object");
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw InputError(what + ": unknown key \"" + it.key() + "\"");
}

const Json& need(const Json& j, const std::string& key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(what + ": missing key \"" + key + "\"");
  return *it;
}

double as_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InputError(what + ": non-finite number");
  return v;
}

std::size_t as_count(const Json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(what + ": expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

Vector as_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array");
  Vector v(static_cast<Idx>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Idx>(i)) = as_number(j[i], what + "[" + std::to_string(i) + "]");
  return v;
}

// `cols` < 0 accepts any width; an empty array gives 0 x max(cols, 0).
Matrix as_matrix(const Json& j, const std::string& what, Idx rows = -1, Idx cols = -1) {
  if (!j.is_array()) throw InputError(what + ": expected an array of rows");
  if (rows >= 0 && static_cast<Idx>(j.size()) != rows)
    throw InputError(what + ": expected " + std::to_string(rows) + " rows");
  if (j.empty()) return Matrix(0, std::max<Idx>(cols, 0));
  Matrix m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = as_vector(j[r], what + "[" + std::to_string(r) + "]");
    if (r == 0) {
      if (cols >= 0 && row.size() != cols) throw InputError(what + ": expected " + std::to_string(cols) + " columns");
      m.resize(static_cast<Idx>(j.size()), row.size());
    } else if (row.size() != m.cols()) {
      throw InputError(what + ": ragged rows");
    }
    m.row(static_cast<Idx>(r)) = row.transpose();
  }
  return m;
}

SymMatrix as_symmetric(const Json& j, const std::string& what, Idx order) {
  const Matrix m = as_matrix(j, what, order, order);
  if (order < 1) throw InputError(what + ": order must be positive");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw InputError(what + ": matrix is not symmetric");
  return SymMatrix(m);
}

void dump_rec(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_end = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump_rec(it.value(), indent, depth + 1, out);
      }
      out += nl + pad_end + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are mostly matrix rows.
      bool flat = true;
      for (const auto& e : j)
        if (e.is_structured()) flat = false;
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",";
        if (!flat) out += nl + pad;
        dump_rec(j[i], indent, depth + 1, out);
      }
      if (!flat) out += nl + pad_end;
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

const char* verdict_name(MembershipVerdict::Verdict v) {
  switch (v) {
    case MembershipVerdict::Verdict::Member: return "Member";
    case MembershipVerdict::Verdict::NotMember: return "NotMember";
    case MembershipVerdict::Verdict::Unknown: return "Unknown";
  }
  return "?";
}

Json residual_pair(const ResidualPair& r) { return {{"linear", r.linear}, {"quadratic", r.quadratic}}; }

}  // namespace

// ---------------------------------------------------------------- parsing

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  return out;
}

GroundCone cone_from_json(const Json& j) {
  require_object(j, "cone");
  if (j.size() != 1) throw InputError("cone: expected exactly one of orthant, free, zero, product");
  reject_unknown(j, {"orthant", "free", "zero", "product"}, "cone");
  const auto it = j.begin();
  if (it.key() == "product") {
    if (!it.value().is_array()) throw InputError("cone.product: expected an array");
    std::vector<GroundCone> parts;
    for (const auto& p : it.value()) parts.push_back(cone_from_json(p));
    return GroundCone::product(parts);
  }
  const std::size_t n = as_count(it.value(), "cone." + it.key());
  if (it.key() == "orthant") return GroundCone::orthant(n);
  if (it.key() == "free") return GroundCone::free(n);
  return GroundCone::zero(n);
}

Json cone_to_json(const GroundCone& k) {
  auto one = [](const ConeFactor& f) {
    switch (f.kind) {
      case ConeFactor::Kind::Orthant: return Json{{"orthant", f.dim}};
      case ConeFactor::Kind::Free: return Json{{"free", f.dim}};
      case ConeFactor::Kind::Zero: return Json{{"zero", f.dim}};
    }
    return Json{};
  };
  if (k.factors().size() == 1) return one(k.factors()[0]);
  Json parts = Json::array();
  for (const auto& f : k.factors()) parts.push_back(one(f));
  return Json{{"product", parts}};
}

namespace {

PartialMatrix pm_from_keys(const Json& j) {
  const std::size_t n1 = as_count(need(j, "n1", "partial matrix"), "n1");
  const std::size_t n2 = as_count(need(j, "n2", "partial matrix"), "n2");
  const std::size_t s = as_count(need(j, "S", "partial matrix"), "S");
  if (n1 < 1 || n2 < 1 || s < 1) throw InputError("partial matrix: n1, n2 and S must be positive");
  const SymMatrix x = as_symmetric(need(j, "X", "partial matrix"), "X", static_cast<Idx>(n1));
  const Json& zj = need(j, "Z", "partial matrix");
  const Json& yj = need(j, "Y", "partial matrix");
  if (!zj.is_array() || zj.size() != s) throw InputError("Z: expected one block per arm");
  if (!yj.is_array() || yj.size() != s) throw InputError("Y: expected one block per arm");
  std::vector<Matrix> z;
  std::vector<SymMatrix> y;
  for (std::size_t i = 0; i < s; ++i) {
    z.push_back(as_matrix(zj[i], "Z[" + std::to_string(i) + "]", static_cast<Idx>(n2), static_cast<Idx>(n1)));
    y.push_back(as_symmetric(yj[i], "Y[" + std::to_string(i) + "]", static_cast<Idx>(n2)));
  }
  try {
    return PartialMatrix(ArrowheadPattern(n1, n2, s), x, std::move(z), std::move(y));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

}  // namespace

PartialMatrix partial_matrix_from_json(const Json& j) {
  require_object(j, "partial matrix");
  reject_unknown(j, {"n1", "n2", "S", "X", "Z", "Y"}, "partial matrix");
  return pm_from_keys(j);
}

Json partial_matrix_to_json(const PartialMatrix& pm) {
  const auto& p = pm.pattern();
  Json z = Json::array(), y = Json::array();
  for (std::size_t i = 0; i < p.arms; ++i) {
    z.push_back(matrix_to_json(pm.cross(i)));
    y.push_back(matrix_to_json(pm.arm_diag(i).dense()));
  }
  return {{"n1", p.n1}, {"n2", p.n2}, {"S", p.arms}, {"X", matrix_to_json(pm.nw().dense())}, {"Z", z}, {"Y", y}};
}

CompletionProblem completion_problem_from_json(const Json& j) {
  require_object(j, "completion problem");
  reject_unknown(j, {"n1", "n2", "S", "X", "Z", "Y", "f", "g", "d", "f0", "d0", "K"}, "completion problem");
  PartialMatrix pm = pm_from_keys(j);
  const std::size_t n = pm.pattern().n1 - 1;
  const std::size_t s = pm.pattern().arms;
  GroundCone k = j.contains("K") ? cone_from_json(j["K"]) : GroundCone::orthant(n);

  std::optional<ConstraintData> data;
  const bool any = j.contains("f") || j.contains("g") || j.contains("d");
  if (any) {
    if (!(j.contains("f") && j.contains("g") && j.contains("d")))
      throw InputError("completion problem: f, g and d must be given together");
    const Matrix f = as_matrix(j["f"], "f", static_cast<Idx>(s), static_cast<Idx>(n));
    const Vector g = as_vector(j["g"], "g");
    const Vector d = as_vector(j["d"], "d");
    if (g.size() != static_cast<Idx>(s) || d.size() != static_cast<Idx>(s))
      throw InputError("completion problem: g and d need one entry per arm");
    Vector f0 = j.contains("f0") ? as_vector(j["f0"], "f0") : Vector::Zero(static_cast<Idx>(n));
    if (f0.size() != static_cast<Idx>(n)) throw InputError("f0: wrong length");
    const double d0 = j.contains("d0") ? as_number(j["d0"], "d0") : 0.0;
    std::vector<Vector> fv;
    for (Idx i = 0; i < f.rows(); ++i) fv.emplace_back(f.row(i).transpose());
    try {
      data = ConstraintData::width_one(k, std::move(f0), d0, std::move(fv), std::vector<double>(g.data(), g.data() + g.size()),
                                       std::vector<double>(d.data(), d.data() + d.size()));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  } else if (j.contains("f0") || j.contains("d0")) {
    throw InputError("completion problem: f0/d0 given without f, g, d");
  }
  try {
    return CompletionProblem(std::move(pm), std::move(k), std::move(data));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

QPInstance qp_from_json(const Json& j) {
  require_object(j, "QP instance");
  reject_unknown(j, {"A", "a", "F", "d", "K"}, "QP instance");
  QPInstance qp;
  qp.a = as_vector(need(j, "a", "QP instance"), "a");
  const auto n = qp.a.size();
  if (n < 1) throw InputError("a: need at least one variable");
  qp.A = as_symmetric(need(j, "A", "QP instance"), "A", n);
  qp.d = as_vector(need(j, "d", "QP instance"), "d");
  qp.F = as_matrix(need(j, "F", "QP instance"), "F", qp.d.size(), n);
  qp.K = j.contains("K") ? cone_from_json(j["K"]) : GroundCone::orthant(static_cast<std::size_t>(n));
  try {
    qp.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return qp;
}

Json qp_to_json(const QPInstance& qp) {
  return {{"A", matrix_to_json(qp.A.dense())},
          {"a", vector_to_json(qp.a)},
          {"F", matrix_to_json(qp.F)},
          {"d", vector_to_json(qp.d)},
          {"K", cone_to_json(qp.K)}};
}

// ---------------------------------------------------------------- reports

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Idx r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Idx c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Idx i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json constraint_data_to_json(const ConstraintData& data) {
  Json f = Json::array(), g = Json::array(), ki = Json::array();
  for (std::size_t i = 0; i < data.arms(); ++i) {
    f.push_back(vector_to_json(data.f[i]));
    g.push_back(vector_to_json(data.g[i]));
    ki.push_back(cone_to_json(data.ki[i]));
  }
  return {{"K", cone_to_json(data.k0)}, {"Ki", ki}, {"f0", vector_to_json(data.f0)}, {"d0", data.d0},
          {"f", f}, {"g", g}, {"d", data.d}};
}

Json membership_to_json(const MembershipVerdict& m) {
  return {{"verdict", verdict_name(m.verdict)},
          {"reason", m.reason},
          {"tol", m.tol},
          {"factor", m.factor ? matrix_to_json(*m.factor) : Json(nullptr)}};
}

Json certificate_to_json(const CompletabilityCertificate& c) {
  Json out{{"verdict", to_string(c.verdict)}, {"reason", c.reason}, {"data_source", c.data_source}};
  out["data"] = c.data ? constraint_data_to_json(*c.data) : Json(nullptr);
  if (c.residuals) {
    Json arms = Json::array();
    for (const auto& r : c.residuals->arms) arms.push_back(residual_pair(r));
    out["residuals"] = {{"arms", arms}, {"f0", residual_pair(c.residuals->f0)}, {"tol", c.residuals->tol},
                        {"ok", c.residuals->ok}};
  } else {
    out["residuals"] = nullptr;
  }
  Json blocks = Json::array();
  for (const auto& b : c.blocks) blocks.push_back(membership_to_json(b));
  out["blocks"] = blocks;
  if (c.conditions) {
    const auto& cr = *c.conditions;
    Json cond_iii{{"diagnostics", cr.cond_iii.diagnostics}};
    if (cr.cond_iii.certificate) {
      const auto& ct = *cr.cond_iii.certificate;
      cond_iii["certificate"] = {{"pivot", ct.pivot},
                                 {"lambda", ct.lambda},
                                 {"sign", ct.sign == LambdaSign::Free ? "free" : "nonneg"}};
    } else {
      cond_iii["certificate"] = nullptr;
    }
    out["conditions"] = {{"cond_i", cr.cond_i},
                         {"boundedness", {{"status", to_string(cr.boundedness.status)}, {"reason", cr.boundedness.reason}}},
                         {"cond_iii", cond_iii},
                         {"all_pass", cr.all_pass()}};
  } else {
    out["conditions"] = nullptr;
  }
  return out;
}

Json solve_result_to_json(const SolveResult& r) {
  return {{"status", to_string(r.status)}, {"objective", r.objective},       {"primal_residual", r.primal_residual},
          {"dual_residual", r.dual_residual}, {"gap", r.gap}, {"iterations", r.iterations}, {"message", r.message}};
}

Json completion_result_to_json(const CompletionResult& r) {
  return {{"completed", r.completion.has_value()},
          {"completion", r.completion ? matrix_to_json(r.completion->full.dense()) : Json(nullptr)},
          {"membership", membership_to_json(r.membership)},
          {"solve", r.solve ? solve_result_to_json(*r.solve) : Json(nullptr)},
          {"message", r.message}};
}

Json exactness_report_to_json(const ExactnessReport& r) {
  Json out{{"lower", r.lower},
           {"upper", r.upper ? Json(*r.upper) : Json(nullptr)},
           {"rank_one", r.rank_one},
           {"bounds_match", r.bounds_match},
           {"overall", to_string(r.overall)},
           {"proven_by", r.proven_by},
           {"solver_status", r.solver_status},
           {"diagnostics", r.diagnostics}};
  if (r.cert_a)
    out["certificate_a"] = {{"u", vector_to_json(r.cert_a->u)},
                            {"alpha", r.cert_a->alpha},
                            {"w", r.cert_a->w},
                            {"kernel_residual", r.cert_a->kernel_residual}};
  else
    out["certificate_a"] = nullptr;
  if (r.cert_b)
    out["certificate_b"] = {{"u", vector_to_json(r.cert_b->u)},
                            {"gamma", vector_to_json(r.cert_b->gamma)},
                            {"kernel_residual", r.cert_b->kernel_residual},
                            {"polytope_bounded", r.cert_b->polytope_bounded}};
  else
    out["certificate_b"] = nullptr;
  const auto& s = r.solution;
  Json z = Json::array();
  for (const auto& zi : s.z) z.push_back(vector_to_json(zi));
  out["solution"] = {{"x", vector_to_json(s.x)}, {"X", s.X.order() ? matrix_to_json(s.X.dense()) : Json::array()},
                     {"z", z}, {"y", s.y}, {"Y", s.Y}, {"objective", s.objective},
                     {"solve", solve_result_to_json(s.diagnostics)}};
  return out;
}

Json oracle_result_to_json(const OracleResult& r) {
  return {{"found", r.completion.has_value()},
          {"completion", r.completion ? matrix_to_json(r.completion->full.dense()) : Json(nullptr)},
          {"best_min_eigenvalue", r.best_min_eigenvalue},
          {"best_entries", r.best_entries}};
}

}  // namespace cppc
