#include "doctest.h"

#include "cppc/matrix.hpp"
#include "oracles.hpp"

using namespace cppc;

namespace {

PartialMatrix ex21() {
  return PartialMatrix(ArrowheadPattern(2, 1, 2), SymMatrix{{6, 3}, {3, 6}},
                       {(Matrix(1, 2) << 0, 3).finished(), (Matrix(1, 2) << 3, 0).finished()},
                       {SymMatrix{{2}}, SymMatrix{{2}}});
}

PartialMatrix ex58() {
  return PartialMatrix(ArrowheadPattern(2, 1, 2), SymMatrix{{1, 0.45}, {0.45, 0.3}},
                       {(Matrix(1, 2) << 0.55, 0.15).finished(), (Matrix(1, 2) << 0.275, 0.025).finished()},
                       {SymMatrix{{0.4}}, SymMatrix{{0.6}}});
}

PartialMatrix random_pm(oracle::Rng& rng, std::size_t n1, std::size_t n2, std::size_t s) {
  const ArrowheadPattern p(n1, n2, s);
  const Matrix g = rng.normal_matrix(static_cast<int>(p.total_order()), static_cast<int>(p.total_order()));
  return PartialMatrix::from_full(SymMatrix(Matrix(g + g.transpose())), p);
}

}  // namespace

TEST_CASE("SymMatrix keeps the upper triangle") {
  const Matrix m = (Matrix(2, 2) << 1, 2, 99, 3).finished();
  const SymMatrix s(m);
  CHECK(s(1, 0) == 2.0);
  CHECK(s(0, 1) == 2.0);
  CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(SymMatrix(Matrix(0, 0)), std::invalid_argument);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = INFINITY;
  CHECK_THROWS_AS(SymMatrix{bad}, std::invalid_argument);
  CHECK(SymMatrix::identity(3).dot(SymMatrix::identity(3)) == 3.0);
}

TEST_CASE("arrowhead pattern bookkeeping") {
  const ArrowheadPattern p(3, 2, 3);
  CHECK(p.total_order() == 9);
  CHECK(!p.arm_of(2).has_value());
  CHECK(*p.arm_of(3) == 0);
  CHECK(*p.arm_of(8) == 2);
  CHECK(p.is_specified(0, 8));
  CHECK(p.is_specified(3, 4));
  CHECK(!p.is_specified(3, 5));
  CHECK(p.unspecified_count() == 3 * 4);
  CHECK_THROWS(ArrowheadPattern(0, 1, 1));
}

TEST_CASE("extract_block on the classical non-completable example") {
  const PartialMatrix pm = ex21();
  CHECK(extract_block(pm, 0).dense() == SymMatrix{{6, 3, 0}, {3, 6, 3}, {0, 3, 2}}.dense());
  CHECK(extract_block(pm, 1).dense() == SymMatrix{{6, 3, 3}, {3, 6, 0}, {3, 0, 2}}.dense());
  CHECK_THROWS_AS(extract_block(pm, 2), std::out_of_range);
  const PartialMatrix z = PartialMatrix::zero(ArrowheadPattern(3, 2, 2));
  CHECK(extract_block(z, 1).dense() == Matrix::Zero(5, 5));
  CHECK(!pm.entry(2, 3).has_value());
  CHECK(*pm.entry(3, 0) == 3.0);
}

TEST_CASE("partial Frobenius product") {
  const ArrowheadPattern p(3, 1, 2);
  Matrix id = Matrix::Identity(5, 5);
  const PartialMatrix eye = PartialMatrix::from_full(SymMatrix(id), p);
  CHECK(partial_frobenius(eye, eye) == doctest::Approx(5.0));
  oracle::Rng rng(7);
  const PartialMatrix a = random_pm(rng, 3, 1, 2);
  const PartialMatrix b = random_pm(rng, 3, 1, 2);
  CHECK(partial_frobenius(a, PartialMatrix::zero(p)) == 0.0);
  const double dense = a.zero_filled().dot(b.zero_filled());
  CHECK(partial_frobenius(a, b) == doctest::Approx(dense).epsilon(1e-12));
  CHECK(partial_frobenius(a, b) == doctest::Approx(partial_frobenius(b, a)).epsilon(1e-14));
  // Bilinear.
  const PartialMatrix c = random_pm(rng, 3, 1, 2);
  const PartialMatrix sum = PartialMatrix::from_full(SymMatrix(Matrix(2.0 * a.zero_filled().dense() + c.zero_filled().dense())), p);
  CHECK(partial_frobenius(sum, b) ==
        doctest::Approx(2.0 * partial_frobenius(a, b) + partial_frobenius(c, b)).epsilon(1e-12));
  CHECK_THROWS(partial_frobenius(a, PartialMatrix::zero(ArrowheadPattern(3, 1, 3))));
}

TEST_CASE("assemble_completion and agrees") {
  const PartialMatrix pm = ex58();
  const Completion c = assemble_completion(pm, {Matrix::Constant(1, 1, 0.25)});
  CHECK(c.full(2, 3) == 0.25);
  CHECK(c.full(3, 2) == 0.25);
  CHECK(agrees(c.full, pm, 1e-9));
  CHECK(agrees(pm.zero_filled(), pm, 0.0));
  Matrix perturbed = c.full.dense();
  perturbed(0, 1) += 2e-8;
  perturbed(1, 0) += 2e-8;
  CHECK(!agrees(SymMatrix(perturbed), pm, 1e-8));
  CHECK_THROWS(assemble_completion(pm, {}));
  CHECK_THROWS(agrees(SymMatrix::identity(3), pm));

  // S = 1 has nothing unspecified.
  oracle::Rng rng(2);
  const PartialMatrix one = random_pm(rng, 3, 2, 1);
  CHECK(assemble_completion(one, {}).full.dense() == one.zero_filled().dense());

  const PartialMatrix r = random_pm(rng, 2, 2, 3);
  std::vector<Matrix> off;
  for (int k = 0; k < 3; ++k) off.push_back(rng.normal_matrix(2, 2));
  const Completion rc = assemble_completion(r, off);
  CHECK(agrees(rc.full, r, 0.0));
  // Off block (0,1) sits at rows of arm 0, columns of arm 1.
  CHECK(rc.full(2, 4) == off[0](0, 0));
  CHECK(rc.full(3, 4) == off[0](1, 0));
  CHECK(rc.full(4, 2) == off[0](0, 0));
  CHECK(rc.full(5, 6) == off[2](1, 0));
  CHECK(rc.full(6, 5) == off[2](1, 0));
}

TEST_CASE("blocks of a CP matrix are its principal submatrices") {
  oracle::Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n1 = 1 + static_cast<std::size_t>(t % 3), n2 = 1 + static_cast<std::size_t>(t % 2), s = 2 + static_cast<std::size_t>(t % 2);
    const ArrowheadPattern p(n1, n2, s);
    const Matrix b = rng.uniform_matrix(static_cast<int>(p.total_order()), 4, 0.0, 1.0);
    const SymMatrix m(Matrix(b * b.transpose()));
    const PartialMatrix pm = PartialMatrix::from_full(m, p);
    for (std::size_t i = 0; i < s; ++i) {
      const SymMatrix blk = extract_block(pm, i);
      CHECK(blk.dense() == m.principal(p.block_indices(i)).dense());
      CHECK(blk.dense() == blk.dense().transpose());
    }
  }
}

TEST_CASE("scaling multiplies specified entries") {
  const PartialMatrix pm = ex21().scaled(1.0 / 6.0);
  CHECK(pm.nw()(0, 0) == doctest::Approx(1.0));
  CHECK(pm.arm_diag(1)(0, 0) == doctest::Approx(1.0 / 3.0));
}
