#include "doctest.h"

#include "cppc/admm.hpp"
#include "cppc/qp_relax.hpp"
#include "oracles.hpp"

using namespace cppc;

namespace {

SolveOptions tight() {
  SolveOptions o;
  o.tol_primal = 1e-10;
  o.tol_dual = 1e-10;
  o.tol_gap = 1e-10;
  return o;
}

// min c^T x over {G x <= h, x >= 0} written with nonnegative scalars and slacks.
ConicProgram lp_program(const Vector& c, const Matrix& g, const Vector& h, bool as_blocks) {
  ConicProgram p;
  const auto n = static_cast<std::size_t>(c.size());
  const auto m = static_cast<std::size_t>(g.rows());
  std::vector<std::size_t> xv, sv;
  for (std::size_t j = 0; j < n + m; ++j) {
    std::size_t var;
    if (as_blocks) {
      BlockSpec spec;
      spec.order = 1;
      var = p.entry_var(p.add_block(spec), 0, 0);
    } else {
      var = p.scalar_var(p.add_scalar(true));
    }
    (j < n ? xv : sv).push_back(var);
  }
  for (std::size_t j = 0; j < n; ++j) p.objective().add(xv[j], c(static_cast<Eigen::Index>(j)));
  for (std::size_t i = 0; i < m; ++i) {
    LinearForm row;
    for (std::size_t j = 0; j < n; ++j) row.add(xv[j], g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    row.add(sv[i], 1.0);
    p.add_equality(std::move(row), h(static_cast<Eigen::Index>(i)));
  }
  return p;
}

QPInstance ex64() {
  QPInstance qp;
  qp.A = SymMatrix{{-1, 0}, {0, -1}};
  qp.a = Vector::Zero(2);
  qp.F = (Matrix(2, 2) << 1, 2, 2, 1).finished();
  qp.d = Vector::Ones(2);
  qp.K = GroundCone::orthant(2);
  return qp;
}

}  // namespace

TEST_CASE("trivial feasibility program") {
  ConicProgram p;
  BlockSpec spec;
  spec.order = 2;
  const auto b = p.add_block(spec);
  LinearForm f;
  f.add(p.entry_var(b, 0, 0), 1.0);
  p.add_equality(std::move(f), 1.0);
  const auto r = solve(p);
  CHECK(r.status == SolveResult::Status::Optimal);
  CHECK(std::abs(r.objective) <= 1e-8);
  const auto k = kkt_residuals(p, r.values);
  CHECK(k.equality <= 1e-6);
  CHECK(k.cone_violation <= 1e-6);
}

TEST_CASE("diagonal LP program") {
  const Matrix g = (Matrix(2, 2) << 1, 2, 2, 1).finished();
  for (bool blocks : {false, true}) {
    const ConicProgram p = lp_program(-Vector::Ones(2), g, Vector::Ones(2), blocks);
    const auto r = solve(p, tight());
    REQUIRE(r.status == SolveResult::Status::Optimal);
    CHECK(-r.objective == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
  }
}

TEST_CASE("inconsistent equalities are infeasible") {
  ConicProgram p;
  const auto s = p.scalar_var(p.add_scalar(false));
  LinearForm a, b;
  a.add(s, 1.0);
  b.add(s, 1.0);
  p.add_equality(std::move(a), 1.0);
  p.add_equality(std::move(b), 2.0);
  CHECK(solve(p).status == SolveResult::Status::Infeasible);
}

TEST_CASE("relaxation of the QP example") {
  for (bool scaling : {true, false}) {
    SolveOptions o;
    o.scaling = scaling;
    const Relaxation rel = build_sparse_relaxation(ex64());
    const auto r = solve(rel.program, o);
    REQUIRE(r.status == SolveResult::Status::Optimal);
    CHECK(std::abs(r.objective + 0.25) <= 1e-5);
    const auto k = kkt_residuals(rel.program, r.values);
    CHECK(k.equality <= 1e-6);
    CHECK(k.cone_violation <= 1e-6);
  }
}

TEST_CASE("KKT residuals at the hand-built relaxation point") {
  const Relaxation rel = build_sparse_relaxation(ex64(), false);
  const ConicProgram& p = rel.program;
  REQUIRE(p.num_blocks() == 2);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(p.num_vars()));
  // Block i = [1, x, y_i] with x = (1/4, 1/4), X = diag(1/8), y_i = 1/4,
  // Z_1 = (1/8, 0), Z_2 = (0, 1/8), Y_i = 1/8.
  const double z[2][2] = {{0.125, 0.0}, {0.0, 0.125}};
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t b = rel.arm_blocks[i];
    const double m[4][4] = {{1, 0.25, 0.25, 0.25},
                            {0.25, 0.125, 0, z[i][0]},
                            {0.25, 0, 0.125, z[i][1]},
                            {0.25, z[i][0], z[i][1], 0.125}};
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = r; c < 4; ++c) v(static_cast<Eigen::Index>(p.entry_var(b, r, c))) = m[r][c];
  }
  const auto k = kkt_residuals(p, v);
  CHECK(k.equality <= 1e-12);
  CHECK(k.cone_violation <= 1e-12);
  CHECK(k.objective == doctest::Approx(-0.25));

  // Shift one right-hand side by 0.1.
  ConicProgram q = p;
  LinearForm lf = q.equality(0);
  q.add_equality(std::move(lf), q.equality_rhs(0) + 0.1);
  CHECK(kkt_residuals(q, v).equality >= 0.1 - 1e-12);
}

TEST_CASE("random LPs against vertex enumeration") {
  oracle::Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const int n = rng.integer(1, 3);
    const int m = rng.integer(1, 4);
    const Matrix g = rng.uniform_matrix(m, n, 0.1, 1.0);
    const Vector h = rng.uniform_matrix(m, 1, 0.5, 2.0);
    Vector c(n);
    for (int j = 0; j < n; ++j) c(j) = rng.normal();
    const auto r = solve(lp_program(c, g, h, t % 2 == 1), tight());
    REQUIRE(r.status == SolveResult::Status::Optimal);
    Matrix gg(m + n, n);
    gg << g, -Matrix::Identity(n, n);
    Vector hh(m + n);
    hh << h, Vector::Zero(n);
    const auto ref = oracle::lp_min(c, gg, hh);
    REQUIRE(ref.has_value());
    CHECK(std::abs(r.objective - *ref) <= 1e-6);
  }
}

TEST_CASE("validation") {
  ConicProgram empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}
