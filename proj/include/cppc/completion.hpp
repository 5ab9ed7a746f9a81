#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cppc/admm.hpp"
#include "cppc/conditions.hpp"
#include "cppc/cones.hpp"
#include "cppc/matrix.hpp"

namespace cppc {

/// Width-one arrowhead completion instance. The NW corner is rescaled to 1
/// at construction; `data` (when given) refers to the rescaled matrix.
class CompletionProblem {
 public:
  /// Throws std::invalid_argument when n2 != 1, when the NW corner is not
  /// positive, or when K does not match the x-part.
  CompletionProblem(PartialMatrix pm, GroundCone k, std::optional<ConstraintData> data = std::nullopt);

  const PartialMatrix& original() const { return original_; }
  const PartialMatrix& pm() const { return scaled_; }
  /// NW corner of the original matrix.
  double scale() const { return scale_; }
  const GroundCone& k() const { return k_; }
  const std::optional<ConstraintData>& data() const { return data_; }

  std::size_t n() const { return k_.dim(); }
  std::size_t arms() const { return scaled_.pattern().arms; }
  /// R_+ x K x R_+, the cone of every specified block.
  GroundCone block_cone() const;
  /// R_+ x K x R_+^S, the cone of the full completion.
  GroundCone full_cone() const;

 private:
  PartialMatrix original_;
  PartialMatrix scaled_;
  double scale_ = 1.0;
  GroundCone k_;
  std::optional<ConstraintData> data_;
};

struct ResidualPair {
  double linear = 0.0;
  double quadratic = 0.0;
};

struct BlockConstraintReport {
  std::vector<ResidualPair> arms;
  ResidualPair f0;
  double tol = 0.0;
  bool ok = false;
};

/// Residuals of f_i^T x + g_i y_i = d_i and
/// f_i f_i^T . X + 2 g_i f_i^T z_i + g_i^2 Y_i = d_i^2 for every arm, and of
/// the f0 pair. `ok` compares each against tol * max(1, d_i^2).
BlockConstraintReport verify_block_constraints(const PartialMatrix& pm, const ConstraintData& data,
                                               double tol = kDefaultAgreementTol);

struct CompletabilityCertificate {
  enum class Verdict { Certified, NoCertificate };
  Verdict verdict = Verdict::NoCertificate;
  std::optional<ConstraintData> data;
  std::string data_source;
  std::optional<BlockConstraintReport> residuals;
  std::vector<MembershipVerdict> blocks;
  std::optional<ConditionReport> conditions;
  std::string reason;

  bool certified() const { return verdict == Verdict::Certified; }
};

const char* to_string(CompletabilityCertificate::Verdict v);

struct FindDataOptions {
  std::uint64_t seed = 0;
  int restarts = 200;
  double kernel_tol = 1e-9;
  double residual_tol = kDefaultAgreementTol;
};

/// One (f, g) pair with d = 1 for a single arm.
struct ArmCandidate {
  Vector f;
  double g = 0.0;
};

/// Outcome of the closed-form path for n <= 2: per arm, the real roots of
/// the univariate polynomial in g that remains after eliminating f, and the
/// candidates with g > 0.
struct SmallDimensionReport {
  bool applicable = false;
  std::vector<std::vector<double>> g_roots;
  std::vector<std::vector<ArmCandidate>> candidates;
  std::vector<std::string> notes;
};

SmallDimensionReport small_dimension_path(const CompletionProblem& problem);

/// Searches constraint data for which every block equation holds and every
/// g_i is positive: the rank-one construction, a shared (d, f) read off the
/// joint kernel of the blocks, the closed form for n <= 2, and finally a
/// seeded random search over each block's kernel. Data passing all three
/// conditions is preferred. Everything returned has been re-verified.
std::optional<ConstraintData> find_data(const CompletionProblem& problem, const FindDataOptions& opts = {});

/// Certified iff the block equations hold, every block is in
/// CPP(R_+ x K x R_+) and conditions i-iii pass. Uses the problem's data if
/// present, otherwise find_data.
CompletabilityCertificate certify_completable(const CompletionProblem& problem, const FindDataOptions& opts = {});

/// Re-checks a Certified certificate using only its stored data.
bool reverify_certificate(const CompletionProblem& problem, const CompletabilityCertificate& cert);

struct CompletionResult {
  std::optional<Completion> completion;
  MembershipVerdict membership;  // of the full matrix in CPP(R_+ x K x R_+^S)
  std::optional<SolveResult> solve;
  std::string message;
};

struct CompleteOptions {
  SolveOptions solver = [] {
    SolveOptions o;
    o.tol_primal = 1e-10;
    o.tol_dual = 1e-10;
    o.tol_gap = 1e-9;
    o.max_iters = 20000;
    return o;
  }();
  double dnn_tol = 1e-9;
};

/// DNN feasibility program over the full matrix with the specified entries
/// fixed. On success the completion is DNN-verified and carries the CP
/// verdict (exact up to order 4, factor search beyond).
CompletionResult complete_numeric(const CompletionProblem& problem, const CompleteOptions& opts = {});

/// z z^T with z = (1, x, y_1..y_S) when every block has rank one.
CompletionResult complete_rank_one(const CompletionProblem& problem, double rank_tol = 1e-9);

struct OracleOptions {
  int steps = 41;
  int refine_iters = 200;
  /// Upper end of the search box; <= 0 uses sqrt(M_ii M_jj) per entry.
  double hi = 0.0;
};

struct OracleResult {
  std::optional<Completion> completion;
  double best_min_eigenvalue = 0.0;
  std::vector<double> best_entries;
};

/// Grid search plus pattern refinement over at most three unspecified
/// entries, maximizing the smallest eigenvalue with entries >= 0.
OracleResult brute_force_completion_oracle(const PartialMatrix& pm, const OracleOptions& opts = {});

}  // namespace cppc
