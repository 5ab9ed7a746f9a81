#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cppc/admm.hpp"
#include "cppc/conditions.hpp"
#include "cppc/cones.hpp"
#include "cppc/conic_program.hpp"
#include "cppc/matrix.hpp"

namespace cppc {

/// inf { x^T A x + 2 a^T x : F x <= d, x in K }.
struct QPInstance {
  SymMatrix A;
  Vector a;
  Matrix F;
  Vector d;
  GroundCone K;

  std::size_t n() const { return static_cast<std::size_t>(a.size()); }
  std::size_t m() const { return static_cast<std::size_t>(F.rows()); }
  /// Throws std::invalid_argument on inconsistent dimensions, non-finite
  /// data, or a cone with zero factors.
  void validate() const;
  /// x^T A x + 2 a^T x.
  double objective(const Vector& x) const;
  bool feasible(const Vector& x, double tol) const;
};

/// Block relaxation with per-arm objective coupling
///   A . X + a^T x + sum_i (B_i . Z_i^T + C_i . Y_i + c_i^T y_i)
/// where B_i = b_i g_i^T and c_i = beta_i g_i. Note the raw linear term
/// a^T x: a QPInstance with 2 a^T x maps to a GeneralInstance with 2a.
class GeneralInstance {
 public:
  /// Validates the coupling shape: B_i (n_x x n_y) must equal b_i g_i^T and
  /// c_i must equal beta_i g_i for some b_i, beta_i. Throws otherwise.
  static GeneralInstance from_raw(SymMatrix A, Vector a, ConstraintData data, const std::vector<Matrix>& B,
                                  std::vector<SymMatrix> C, const std::vector<Vector>& c, double tol = 1e-12);
  /// The slack-variable form of a QP: g_i = 1, b_i = 0, C_i = 0, beta_i = 0.
  static GeneralInstance from_qp(const QPInstance& qp);

  const SymMatrix& A() const { return A_; }
  const Vector& a() const { return a_; }
  const ConstraintData& data() const { return data_; }
  const Vector& b(std::size_t i) const { return b_.at(i); }
  double beta(std::size_t i) const { return beta_.at(i); }
  const SymMatrix& C(std::size_t i) const { return C_.at(i); }

 private:
  GeneralInstance() = default;
  SymMatrix A_;
  Vector a_;
  ConstraintData data_;
  std::vector<Vector> b_;
  std::vector<double> beta_;
  std::vector<SymMatrix> C_;
};

/// A built relaxation: one block [1, x, y_i] per arm, NW parts linked by
/// equalities. With no arms a lone NW block is used and `degenerate` is set.
///
/// Every feasible block is singular (it annihilates (-d_i, f_i, g_i)), so
/// the plain program has no interior and first-order solvers crawl. With
/// `reduced` each arm block M_i is only sign constrained and is tied to a
/// PSD block N_i by M_i = V_i N_i V_i^T, V_i an orthonormal basis of the
/// known kernel's complement. The feasible set is the same.
struct Relaxation {
  ConicProgram program;
  std::vector<std::size_t> arm_blocks;  // program block of each arm
  std::vector<std::size_t> face_blocks; // N_i when reduced
  std::size_t nw_block = 0;
  std::size_t nx = 0;
  bool degenerate = false;
  bool reduced = false;
};

Relaxation build_general_relaxation(const GeneralInstance& gi, bool reduce = true);
Relaxation build_sparse_relaxation(const QPInstance& qp, bool reduce = true);

struct RelaxationSolution {
  SymMatrix X;
  Vector x;
  std::vector<SymMatrix> blocks;  // one per arm, layout [1, x, y_i]
  // Filled when every arm has a single y coordinate.
  std::vector<Vector> z;
  std::vector<double> y;
  std::vector<double> Y;
  double objective = 0.0;
  SolveResult diagnostics;

  /// [[1, x^T], [x, X]].
  SymMatrix nw() const;
  /// [[1, x^T, y_i^T], [x, X, Z_i^T], [y_i, Z_i, Y_i]].
  const SymMatrix& block(std::size_t i) const { return blocks.at(i); }
  std::size_t arms() const { return blocks.size(); }
};

RelaxationSolution extract_solution(const Relaxation& r, const SolveResult& res);

struct Bounds {
  double lower = 0.0;
  RelaxationSolution sol;
  std::optional<double> upper;
  std::string diagnostics;
};

/// Solves the sparse relaxation; the x-part gives the upper bound when it is
/// feasible for the QP within `feas_tol`.
Bounds solve_bounds(const QPInstance& qp, const SolveOptions& opts = {}, double feas_tol = 1e-6);

inline constexpr double kKernelTol = 1e-6;

/// True iff every block's second-largest eigenvalue is <= tol * largest.
bool rank_one_certificate(const RelaxationSolution& sol, double tol = kKernelTol);

/// Orthonormal eigenvectors with |eigenvalue| <= tol * largest |eigenvalue|.
std::vector<Vector> kernel_vectors(const SymMatrix& m, double tol = kKernelTol);

struct CertificateB {
  Vector u;
  Vector gamma;
  double kernel_residual = 0.0;  // |NW (-1, u)|_inf
  /// Whether P = {x in K : F x <= d} was verified bounded, the hypothesis
  /// under which the test is also necessary.
  bool polytope_bounded = false;
};

struct CertificateA {
  Vector u;  // unit vector
  std::vector<double> alpha;
  std::vector<double> w;
  double kernel_residual = 0.0;  // max_i |M_i v_i|_inf
};

struct CertificateOptions {
  double kernel_tol = kKernelTol;
  /// Slack for the inequalities on gamma and for kernel residuals, relative
  /// to the block scale; needed because the solution is only approximate.
  double cert_tol = 1e-6;
};

std::optional<CertificateB> certificate_b(const QPInstance& qp, const RelaxationSolution& sol,
                                          const CertificateOptions& opts = {});
std::optional<CertificateA> certificate_a(const QPInstance& qp, const RelaxationSolution& sol,
                                          const CertificateOptions& opts = {});

bool verify_certificate_b(const QPInstance& qp, const RelaxationSolution& sol, const CertificateB& c,
                          const CertificateOptions& opts = {});
bool verify_certificate_a(const QPInstance& qp, const RelaxationSolution& sol, const CertificateA& c,
                          const CertificateOptions& opts = {});

/// For PSD M = [[1, x^T, y^T], [x, X, Z^T], [y, Z, Y]] (b may be empty, in
/// which case M is [[1, x^T], [x, X]]), evaluates
///   first:  a^T x + b^T y = r  and  a a^T . X + 2 b^T Z a + b b^T . Y = r^2
///   second: a a^T . X + 2 b^T Z a + b b^T . Y - 2 r a^T x - 2 r b^T y + r^2 = 0
/// Throws std::invalid_argument if M is not PSD within tol.
std::pair<bool, bool> lemma_equivalence_check(const SymMatrix& m, const Vector& a, const Vector& b, double r,
                                              double tol = 1e-9);

struct ExactnessReport {
  enum class Overall { ProvenExact, Unknown };
  double lower = 0.0;
  std::optional<double> upper;
  bool rank_one = false;
  bool bounds_match = false;
  std::optional<CertificateA> cert_a;
  std::optional<CertificateB> cert_b;
  Overall overall = Overall::Unknown;
  std::vector<std::string> proven_by;
  std::string solver_status;
  std::string diagnostics;
  RelaxationSolution solution;
};

const char* to_string(ExactnessReport::Overall o);

struct ExactnessOptions {
  SolveOptions solver;
  CertificateOptions cert;
  double bound_tol = 1e-6;  // relative, |upper - lower| <= bound_tol (1 + |lower|)
  double rank_tol = kKernelTol;
};

ExactnessReport exactness_report(const QPInstance& qp, const ExactnessOptions& opts = {});

struct QpOracleResult {
  std::optional<double> optimum;  // nullopt: infeasible
  Vector argmin;
  std::size_t faces_checked = 0;
};

/// Exact global optimum of a tiny QP over a bounded polyhedron by
/// enumerating active sets and solving each face's stationarity system.
/// Orthant or zero factors only (free coordinates make the feasible set
/// unbounded in general); intended for n <= 4 and a handful of rows.
QpOracleResult brute_force_qp(const QPInstance& qp, double feas_tol = 1e-9);

}  // namespace cppc
