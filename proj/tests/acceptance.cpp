// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cppc/completion.hpp"
#include "cppc/io.hpp"
#include "cppc/qp_relax.hpp"
#include "oracles.hpp"

using namespace cppc;

namespace {

const std::string kFixtures = CPPC_FIXTURES_DIR;

// Collects failure notes for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

template <class... T>
std::string fmt(const T&... parts) {
  std::ostringstream s;
  s.precision(10);
  (s << ... << parts);
  return s.str();
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

bool report(int id, const std::string& name, double limit_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_s) c.failures.push_back(fmt("took ", secs, " s, limit ", limit_s, " s"));
  const bool ok = c.failures.empty();
  std::printf("%s %d %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs);
  for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
  std::fflush(stdout);
  return ok;
}

// Completion-program primal residuals of a returned matrix: agreement with
// the specified entries and the worst cone violation (eigenvalue or entry).
std::pair<double, double> completion_residuals(const SymMatrix& full, const PartialMatrix& pm) {
  double eq = 0.0;
  const auto n = full.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (auto v = pm.entry(i, j)) eq = std::max(eq, std::abs(full(i, j) - *v));
  const double lmin = Eigen::SelfAdjointEigenSolver<Matrix>(full.dense()).eigenvalues().minCoeff();
  const double emin = full.dense().minCoeff();
  return {eq, std::max({0.0, -lmin, -emin})};
}

void criterion1(Check& c) {
  const QPInstance qp = qp_from_json(read_json_file(kFixtures + "/ex64.json"));
  const ExactnessReport rep = exactness_report(qp);
  c.expect(std::abs(rep.lower + 0.25) <= 1e-4, fmt("lower bound ", rep.lower));
  c.expect(rep.upper && std::abs(*rep.upper + 0.125) <= 1e-4, "upper bound missing or off");
  c.expect(!rep.rank_one, "rank-one certificate fired");
  c.expect(rep.cert_b.has_value(), "certificate b did not fire");
  if (rep.cert_b) {
    const Vector& u = rep.cert_b->u;
    const double s = u(0) / 2.0;
    c.expect(s > 0 && (u / s - vec({2, 2})).cwiseAbs().maxCoeff() <= 1e-4, fmt("u = ", u.transpose()));
    c.expect((rep.cert_b->gamma - vec({1, 1})).cwiseAbs().maxCoeff() <= 1e-4,
             fmt("gamma = ", rep.cert_b->gamma.transpose()));
  }
  c.expect(rep.overall == ExactnessReport::Overall::ProvenExact, "overall not ProvenExact");
}

void criterion2(Check& c) {
  const CompletionProblem p = completion_problem_from_json(read_json_file(kFixtures + "/ex58.json"));
  c.expect(p.data().has_value(), "fixture carries no data");
  if (p.data()) {
    const ConstraintData& d = *p.data();
    c.expect(d.f[0](0) == 1 && d.f[1](0) == 1 && d.g[0](0) == 1 && d.g[1](0) == 2, "fixture data differs");
    const ConditionReport rep = check_conditions(d);
    c.expect(rep.all_pass(), "conditions fail on the stated data");
  }
  const CompletionResult res = complete_numeric(p);
  c.expect(res.completion.has_value(), "complete_numeric found nothing: " + res.message);
  if (res.completion) {
    c.expect(agrees(res.completion->full, p.original(), 1e-7), "completion disagrees with the partial matrix");
    c.expect(is_dnn(res.completion->full, 1e-8), "completion not DNN");
  }
  const Completion w = assemble_completion(p.original(), {Matrix::Constant(1, 1, 0.25)});
  c.expect(w.full.order() == 4 && is_dnn(w.full), "0.25 witness not DNN");
  c.expect(is_cp(w.full).member(), "0.25 witness not CP");
}

void criterion3(Check& c) {
  const CompletionProblem p = completion_problem_from_json(read_json_file(kFixtures + "/ex21.json"));
  const OracleResult orc = brute_force_completion_oracle(p.original());
  c.expect(!orc.completion.has_value(), "oracle returned a completion");
  c.expect(orc.best_min_eigenvalue < -1e-3, fmt("oracle best smallest eigenvalue ", orc.best_min_eigenvalue));
  const auto cert = certify_completable(p);
  c.expect(cert.verdict == CompletabilityCertificate::Verdict::NoCertificate, "certified");
  const SmallDimensionReport sd = small_dimension_path(p);
  c.expect(sd.applicable, "small-dimension path not applicable");
  if (sd.applicable) {
    bool root = false, all_negative = true;
    for (double g : sd.g_roots.at(0)) {
      root = root || std::abs(g + 3.0) <= 1e-6;
      all_negative = all_negative && g < 0;
    }
    c.expect(root && all_negative, "arm 1 roots do not force g_1 = -3");
    c.expect(sd.candidates.at(0).empty(), "arm 1 has a positive-g candidate");
  }
}

void criterion4(Check& c) {
  oracle::Rng rng(2024);
  int certified = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 4), s = rng.integer(1, 4);
    Vector z(1 + n + s);
    z(0) = 1.0;
    for (Eigen::Index i = 1; i < z.size(); ++i) z(i) = rng.uniform(0.05, 2.0);
    const SymMatrix full(Matrix(z * z.transpose()));
    const PartialMatrix pm = PartialMatrix::from_full(full, ArrowheadPattern(1 + n, 1, s));
    const GroundCone k = GroundCone::orthant(static_cast<std::size_t>(n));

    const CompletionResult r = complete_rank_one(CompletionProblem(pm, k));
    if (!r.completion || (r.completion->full.dense() - full.dense()).cwiseAbs().maxCoeff() > 1e-9) {
      c.expect(false, fmt("instance ", t, ": rank-one completion off"));
      continue;
    }
    // [f; g] in the interior of the dual, divided by f^T x + g y_i per arm.
    Vector f(n);
    for (int j = 0; j < n; ++j) f(j) = rng.uniform(0.5, 2.0);
    const double g = rng.uniform(0.5, 2.0);
    const Vector x = z.segment(1, n);
    std::vector<Vector> fi;
    std::vector<double> gi, di;
    for (int i = 0; i < s; ++i) {
      const double den = f.dot(x) + g * z(1 + n + i);
      fi.push_back(f / den);
      gi.push_back(g / den);
      di.push_back(1.0);
    }
    ConstraintData data = ConstraintData::width_one(k, Vector::Zero(n), 0.0, fi, gi, di);
    const auto cert = certify_completable(CompletionProblem(pm, k, data));
    if (cert.certified())
      ++certified;
    else
      c.expect(false, fmt("instance ", t, ": ", cert.reason));
  }
  c.expect(certified == 100, fmt(certified, "/100 certified"));
}

void criterion5(Check& c) {
  oracle::Rng rng(99);
  int proven = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = rng.integer(1, 3), m = rng.integer(1, 4);
    QPInstance qp;
    const Matrix g = rng.normal_matrix(n, n);
    qp.A = SymMatrix(Matrix(0.5 * (g + g.transpose())));
    qp.a = Vector(n);
    for (int j = 0; j < n; ++j) qp.a(j) = rng.normal();
    qp.F = rng.uniform_matrix(m, n, 0.1, 1.0);
    qp.d = rng.uniform_matrix(m, 1, 0.5, 2.0);
    qp.K = GroundCone::orthant(static_cast<std::size_t>(n));

    const QpOracleResult ref = brute_force_qp(qp);
    if (!ref.optimum) {
      c.expect(false, fmt("instance ", t, ": oracle found no optimum"));
      continue;
    }
    // Independent cross-check of the vertex/KKT oracle by a grid.
    Matrix gg(m + n, n);
    gg << qp.F, -Matrix::Identity(n, n);
    Vector hh(m + n);
    hh << qp.d, Vector::Zero(n);
    const auto grid = oracle::qp_grid_min(qp.A.dense(), qp.a, gg, hh, n == 3 ? 40 : 120);
    c.expect(grid && *ref.optimum <= *grid + 1e-9, fmt("instance ", t, ": oracle above grid"));

    const ExactnessReport rep = exactness_report(qp);
    const double opt = *ref.optimum;
    c.expect(rep.lower <= opt + 1e-4, fmt("instance ", t, ": lower ", rep.lower, " > optimum ", opt));
    c.expect(rep.upper.has_value(), fmt("instance ", t, ": no upper bound (", rep.solver_status, ")"));
    if (rep.upper) c.expect(opt <= *rep.upper + 1e-4, fmt("instance ", t, ": upper ", *rep.upper, " < optimum ", opt));
    if (rep.overall == ExactnessReport::Overall::ProvenExact) {
      ++proven;
      c.expect(std::abs(rep.lower - opt) <= 1e-4, fmt("instance ", t, ": proven exact but lower ", rep.lower,
                                                      " vs optimum ", opt));
    }
  }
  std::printf("    %d/50 instances proven exact\n", proven);
}

void criterion6(Check& c) {
  // Fixture corpus.
  {
    const QPInstance qp = qp_from_json(read_json_file(kFixtures + "/ex64.json"));
    for (bool reduce : {true, false}) {
      const Relaxation r = build_sparse_relaxation(qp, reduce);
      SolveOptions o;
      o.max_iters = 20000;
      const SolveResult res = solve(r.program, o);
      if (res.status != SolveResult::Status::Optimal) continue;
      const KktResiduals k = kkt_residuals(r.program, res.values);
      c.expect(k.equality <= 1e-6 && k.cone_violation <= 1e-6,
               fmt("ex64 relaxation (reduce=", reduce, "): residuals ", k.equality, ", ", k.cone_violation));
    }
  }
  for (const char* name : {"ex58.json", "ex21.json"}) {
    const CompletionProblem p = completion_problem_from_json(read_json_file(kFixtures + "/" + name));
    const CompletionResult res = complete_numeric(p);
    if (!res.solve || res.solve->status != SolveResult::Status::Optimal) continue;
    c.expect(res.completion.has_value(), fmt(name, ": Optimal but no completion"));
    if (res.completion) {
      const auto [eq, cone] = completion_residuals(res.completion->full, p.original());
      c.expect(eq <= 1e-6 && cone <= 1e-6, fmt(name, ": residuals ", eq, ", ", cone));
    }
  }
  // Random LPs against vertex enumeration.
  oracle::Rng rng(6);
  SolveOptions tight;
  tight.tol_primal = tight.tol_dual = tight.tol_gap = 1e-10;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 3), m = rng.integer(1, 4);
    const Matrix g = rng.uniform_matrix(m, n, 0.1, 1.0);
    const Vector h = rng.uniform_matrix(m, 1, 0.5, 2.0);
    Vector cost(n);
    for (int j = 0; j < n; ++j) cost(j) = rng.normal();
    ConicProgram p;
    std::vector<std::size_t> xs, ss;
    for (int j = 0; j < n; ++j) xs.push_back(p.scalar_var(p.add_scalar(true)));
    for (int i = 0; i < m; ++i) ss.push_back(p.scalar_var(p.add_scalar(true)));
    for (int j = 0; j < n; ++j) p.objective().add(xs[static_cast<std::size_t>(j)], cost(j));
    for (int i = 0; i < m; ++i) {
      LinearForm row;
      for (int j = 0; j < n; ++j) row.add(xs[static_cast<std::size_t>(j)], g(i, j));
      row.add(ss[static_cast<std::size_t>(i)], 1.0);
      p.add_equality(std::move(row), h(i));
    }
    const SolveResult res = solve(p, tight);
    Matrix gg(m + n, n);
    gg << g, -Matrix::Identity(n, n);
    Vector hh(m + n);
    hh << h, Vector::Zero(n);
    const auto ref = oracle::lp_min(cost, gg, hh);
    c.expect(res.status == SolveResult::Status::Optimal, fmt("LP ", t, ": ", to_string(res.status)));
    c.expect(ref && std::abs(res.objective - *ref) <= 1e-6, fmt("LP ", t, ": ", res.objective, " vs ", *ref));
    if (res.status == SolveResult::Status::Optimal) {
      const KktResiduals k = kkt_residuals(p, res.values);
      c.expect(k.equality <= 1e-6 && k.cone_violation <= 1e-6, fmt("LP ", t, ": KKT residuals"));
    }
  }
}

GroundCone random_cone(oracle::Rng& rng, bool polyhedral_only_orthant_free) {
  std::vector<GroundCone> parts;
  const int k = rng.integer(1, 3);
  for (int i = 0; i < k; ++i) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 2));
    const int kind = rng.integer(0, polyhedral_only_orthant_free ? 1 : 2);
    parts.push_back(kind == 0 ? GroundCone::orthant(n) : kind == 1 ? GroundCone::free(n) : GroundCone::zero(n));
  }
  return GroundCone::product(parts);
}

void criterion7(Check& c) {
  oracle::Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const GroundCone k = random_cone(rng, false);
    c.expect(dual_cone(dual_cone(k)) == k, fmt("dual involution fails on cone ", t));
  }
  int mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + t % 4;
    Matrix m;
    if (t % 2 == 0) {
      const Matrix b = rng.uniform_matrix(n, n + 1, -0.3, 1.0);
      m = b * b.transpose();
    } else {
      const Matrix g = rng.normal_matrix(n, n);
      m = g + g.transpose() + n * Matrix::Identity(n, n);
    }
    const SymMatrix s(m);
    if (is_cp(s).member() != is_dnn(s)) ++mismatches;
  }
  c.expect(mismatches == 0, fmt(mismatches, " is_cp/is_dnn mismatches"));

  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(2, 7);
    const Matrix b = rng.uniform_matrix(n, rng.integer(1, 8), 0.0, 1.0);
    const SymMatrix m(Matrix(b * b.transpose()));
    std::vector<std::size_t> idx;
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < 0.6) idx.push_back(static_cast<std::size_t>(i));
    if (idx.empty()) idx.push_back(0);
    c.expect(is_dnn(m) && is_dnn(m.principal(idx)), fmt("DNN inheritance fails on matrix ", t));
  }

  int both_true = 0;
  for (int t = 0; t < 1000; ++t) {
    const int nx = rng.integer(1, 3), ny = rng.integer(0, 2);
    Vector a(nx), b(ny);
    for (int j = 0; j < nx; ++j) a(j) = rng.normal();
    for (int j = 0; j < ny; ++j) b(j) = rng.normal();
    const double r = rng.normal();
    // Convex combination of lifted points; on the hyperplane for even t.
    const int pts = rng.integer(1, 3);
    Matrix m = Matrix::Zero(1 + nx + ny, 1 + nx + ny);
    double wsum = 0;
    std::vector<double> w(static_cast<std::size_t>(pts));
    for (auto& wk : w) wsum += (wk = rng.uniform(0.1, 1.0));
    for (int p = 0; p < pts; ++p) {
      Vector v(1 + nx + ny);
      v(0) = 1.0;
      for (Eigen::Index j = 1; j < v.size(); ++j) v(j) = rng.normal();
      if (t % 2 == 0) {
        const double miss = a.dot(v.segment(1, nx)) + (ny ? b.dot(v.segment(1 + nx, ny)) : 0.0) - r;
        v.segment(1, nx) -= miss * a / a.squaredNorm();
      }
      m += w[static_cast<std::size_t>(p)] / wsum * v * v.transpose();
    }
    const auto res = lemma_equivalence_check(SymMatrix(m), a, b, r, 1e-7);
    c.expect(res.first == res.second, fmt("lemma mismatch on point ", t));
    both_true += res.first && res.second;
  }
  c.expect(both_true >= 400, fmt("only ", both_true, " satisfied samples"));
}

void criterion8(Check& c) {
  oracle::Rng rng(8);
  int certs = 0;
  for (int t = 0; t < 100; ++t) {
    const GroundCone k0 = random_cone(rng, true);
    const auto kinds = k0.coordinate_kinds();
    const int n = static_cast<int>(k0.dim());
    const int s = rng.integer(1, 3);
    Vector base(n);
    for (int j = 0; j < n; ++j) base(j) = rng.uniform(0.2, 1.5);
    // Rows near multiples of a common vector so that certificates exist.
    std::vector<Vector> f;
    std::vector<double> g, d;
    for (int i = 0; i < s; ++i) {
      Vector fi = rng.uniform(0.5, 2.0) * base;
      for (int j = 0; j < n; ++j)
        if (kinds[static_cast<std::size_t>(j)] == ConeFactor::Kind::Orthant && rng.uniform() < 0.5)
          fi(j) -= rng.uniform(0.0, 0.3);
      f.push_back(fi);
      g.push_back(1.0);
      d.push_back(rng.uniform(0.2, 2.0));
    }
    Vector f0 = Vector::Zero(n);
    double d0 = 0.0;
    if (rng.uniform() < 0.4) {
      f0 = rng.uniform(0.5, 2.0) * base;
      d0 = rng.uniform(0.2, 1.0);
    }
    const ConstraintData data = ConstraintData::width_one(k0, f0, d0, f, g, d);
    const CondIIIResult res = check_cond_iii(data);
    if (!res.certificate) continue;
    ++certs;
    const std::size_t piv = res.certificate->pivot;
    const Vector& fp = piv == 0 ? f0 : f[piv - 1];
    const double dp = piv == 0 ? d0 : d[piv - 1];
    int violations = 0;
    for (int p = 0; p < 10000; ++p) {
      Vector ray(n);
      for (int j = 0; j < n; ++j) {
        const auto kd = kinds[static_cast<std::size_t>(j)];
        ray(j) = kd == ConeFactor::Kind::Orthant ? rng.uniform() : rng.normal();
      }
      const double fr = fp.dot(ray);
      Vector x;
      if (piv == 0) {
        if (std::abs(fr) < 1e-12 || d0 / fr < 0) continue;
        x = d0 / fr * ray;  // on the hyperplane
      } else if (fr > 1e-12) {
        x = rng.uniform() * dp / fr * ray;  // inside the half-space
      } else if (dp >= 0) {
        x = rng.uniform(0.0, 10.0) * ray;  // recession direction
      } else {
        continue;
      }
      for (int i = 0; i < s; ++i)
        if (f[static_cast<std::size_t>(i)].dot(x) > d[static_cast<std::size_t>(i)] + 1e-9 * (1.0 + x.norm()))
          ++violations;
    }
    c.expect(violations == 0, fmt("instance ", t, ": ", violations, " containment violations"));
  }
  std::printf("    %d/100 instances certified\n", certs);
  c.expect(certs >= 20, fmt("only ", certs, " certificates to test"));
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "QP example end-to-end", 30, criterion1);
  ok &= report(2, "two-arm completion example", 5, criterion2);
  ok &= report(3, "non-completable example", 10, criterion3);
  ok &= report(4, "rank-one property suite", 10, criterion4);
  ok &= report(5, "relaxation sandwich property", 60, criterion5);
  ok &= report(6, "solver correctness", 30, criterion6);
  ok &= report(7, "cone-law suite", 5, criterion7);
  ok &= report(8, "condition-checker soundness", 30, criterion8);
  return ok ? 0 : 1;
}
