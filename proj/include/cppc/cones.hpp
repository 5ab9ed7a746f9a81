#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cppc/linalg.hpp"
#include "cppc/matrix.hpp"

namespace cppc {

inline constexpr double kDefaultConeTol = 1e-9;
inline constexpr double kDefaultPsdTol = 1e-10;

/// One Cartesian factor of a ground cone.
struct ConeFactor {
  enum class Kind { Orthant, Free, Zero };
  Kind kind;
  std::size_t dim;

  bool operator==(const ConeFactor&) const = default;
};

/// Closed convex cone built as a Cartesian product of orthant, free and zero
/// factors. The factor list is always flat, adjacent factors of the same
/// kind are merged, and zero-dimensional factors are dropped.
///
/// Second-order factors would slot in as another Kind; they are not supported.
class GroundCone {
 public:
  GroundCone() = default;

  static GroundCone orthant(std::size_t n);
  static GroundCone free(std::size_t n);
  static GroundCone zero(std::size_t n);
  static GroundCone product(const std::vector<GroundCone>& parts);

  std::size_t dim() const;
  const std::vector<ConeFactor>& factors() const { return factors_; }

  /// Per-coordinate kind, length dim().
  std::vector<ConeFactor::Kind> coordinate_kinds() const;
  bool is_orthant() const;
  /// True when every factor is an orthant or zero factor.
  bool within_orthant() const;

  bool operator==(const GroundCone&) const = default;

 private:
  void push(ConeFactor f);
  std::vector<ConeFactor> factors_;
};

bool cone_contains(const GroundCone& k, const Vector& x, double tol = kDefaultConeTol);
GroundCone dual_cone(const GroundCone& k);
/// Strict membership g in int(K*): orthant coordinates must exceed `tol`,
/// free coordinates have a dual with empty interior, zero coordinates are
/// unconstrained.
bool interior_dual_contains(const GroundCone& k, const Vector& g, double tol = kDefaultConeTol);

bool is_psd(const SymMatrix& m, double tol = kDefaultPsdTol);
bool is_dnn(const SymMatrix& m, double tol = kDefaultPsdTol);

struct MembershipVerdict {
  enum class Verdict { Member, NotMember, Unknown };
  Verdict verdict = Verdict::Unknown;
  /// Entrywise-nonnegative factor B with B B^T = M, when one was found.
  std::optional<Matrix> factor;
  std::string reason;
  double tol = 0.0;

  bool member() const { return verdict == Verdict::Member; }
};

struct CpFactorOptions {
  std::size_t rank_budget = 0;  // 0 selects n(n+1)/2
  int max_iters = 5000;
  int restarts = 20;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  /// Rows that must stay nonnegative; empty means all rows.
  std::vector<bool> nonneg_rows;
};

/// Searches for B >= 0 with ||B B^T - M||_F <= tol by alternating between
/// the nonnegative orthant and the orbit {A Q : Q orthogonal} of a square
/// root A of M. Returns nullopt when the search is inconclusive, which is
/// not a proof of non-membership.
std::optional<Matrix> cp_factorize(const SymMatrix& m, const CpFactorOptions& opts = {});

/// Complete positivity test. Exact for order <= 4; for larger orders a
/// factor search decides Member, DNN failure decides NotMember, and
/// anything else is Unknown.
MembershipVerdict is_cp(const SymMatrix& m, double tol = kDefaultPsdTol);

/// Membership in CPP(K) for a polyhedral ground cone K. Zero coordinates
/// must carry zero rows; entries pairing two orthant coordinates must be
/// nonnegative. With at most one orthant coordinate this reduces to PSD
/// (sign flips of factor columns), and an all-orthant K defers to is_cp.
MembershipVerdict is_cpp(const SymMatrix& m, const GroundCone& k, double tol = kDefaultPsdTol);

}  // namespace cppc
