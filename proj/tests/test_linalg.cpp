#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "cppc/linalg.hpp"
#include "oracles.hpp"

using namespace cppc;

TEST_CASE("jacobi agrees with the reference eigensolver") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 12;
    const Matrix g = rng.normal_matrix(n, n);
    const Matrix a = (g + g.transpose()) / 2.0;
    const EigenDecomposition eig = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
    const double scale = std::max(1.0, ref.eigenvalues().cwiseAbs().maxCoeff());
    CHECK((eig.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    // Orthonormal and actually eigenvectors.
    CHECK((eig.vectors.transpose() * eig.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a * eig.vectors - eig.vectors * eig.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-11 * scale);
    for (int k = 1; k < n; ++k) CHECK(eig.values(k - 1) <= eig.values(k));
  }
}

TEST_CASE("jacobi resolves tiny eigenvalues of a graded PSD matrix") {
  // Eigenvalues 1, 1e-8, 1e-14 in a random basis.
  oracle::Rng rng(3);
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(3, 3));
  const Matrix q = qr.householderQ();
  const Vector lam = (Vector(3) << 1.0, 1e-8, 1e-14).finished();
  const Matrix a = q * lam.asDiagonal() * q.transpose();
  const EigenDecomposition eig = jacobi_eigen(a);
  CHECK(eig.values(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.values(1) == doctest::Approx(1e-8).epsilon(1e-6));
  // Forming q diag(lam) q^T perturbs entries by a few ulps of 1.
  CHECK(std::abs(eig.values(0) - 1e-14) < 1e-15);
}

TEST_CASE("jacobi is deterministic and reports non-convergence") {
  const Matrix a = (Matrix(3, 3) << 2, 1, 0, 1, 2, 1, 0, 1, 2).finished();
  const auto e1 = jacobi_eigen(a);
  const auto e2 = jacobi_eigen(a);
  CHECK(e1.values == e2.values);
  CHECK(e1.vectors == e2.vectors);
  CHECK_THROWS_AS(jacobi_eigen(a, 0), EigenSolverError);
  CHECK_THROWS_AS(jacobi_eigen(Matrix(2, 3)), std::invalid_argument);
  Matrix bad = a;
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(jacobi_eigen(bad), std::invalid_argument);
  CHECK(e1.largest_abs() == doctest::Approx(2.0 + std::sqrt(2.0)));
}

TEST_CASE("symmetric pseudo-inverse satisfies the Penrose identities") {
  oracle::Rng rng(5);
  const Matrix b = rng.normal_matrix(5, 3);
  const Matrix a = b * b.transpose();  // rank 3
  const Matrix p = symmetric_pinv(a);
  CHECK((a * p * a - a).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((p * a * p - p).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  const Matrix i3 = Matrix::Identity(3, 3) * 4.0;
  CHECK((symmetric_pinv(i3) - Matrix::Identity(3, 3) * 0.25).cwiseAbs().maxCoeff() < 1e-15);
}
