#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cppc/cones.hpp"
#include "cppc/linalg.hpp"

namespace cppc {

/// Data (f_i, g_i, d_i) describing
///   F_0 = {x in K0 : f0^T x = d0},
///   F_i = {(x, y_i) in K0 x K_i : f_i^T x + g_i^T y_i = d_i},  i = 1..S.
/// Arms are stored 0-based: f[0] is f_1.
struct ConstraintData {
  GroundCone k0;
  std::vector<GroundCone> ki;
  Vector f0;
  double d0 = 0.0;
  std::vector<Vector> f;
  std::vector<Vector> g;
  std::vector<double> d;

  std::size_t arms() const { return f.size(); }
  std::size_t nx() const { return k0.dim(); }
  /// Throws std::invalid_argument on inconsistent lengths or on f0 = 0 with
  /// d0 != 0.
  void validate() const;

  /// Convenience for the width-one case: every K_i is Orthant(1).
  static ConstraintData width_one(GroundCone k0, Vector f0, double d0, std::vector<Vector> f,
                                  const std::vector<double>& g, std::vector<double> d);
};

enum class Boundedness { Bounded, NotBounded, Inconclusive };
const char* to_string(Boundedness b);

struct BoundednessResult {
  Boundedness status = Boundedness::Inconclusive;
  std::string reason;
};

enum class LambdaSign { Free, Nonneg };

/// Pivot i* (0 means F_0) and multipliers lambda_i, one per arm.
struct CondIIICertificate {
  std::size_t pivot = 0;
  std::vector<double> lambda;
  LambdaSign sign = LambdaSign::Free;
};

struct CondIIIResult {
  std::optional<CondIIICertificate> certificate;
  std::vector<std::string> diagnostics;
};

struct ConditionReport {
  std::vector<bool> cond_i;
  BoundednessResult boundedness;
  CondIIIResult cond_iii;

  bool all_pass() const;
};

std::vector<bool> check_cond_i(const ConstraintData& data);

/// f_i in int(K0*) and d_i >= 0; i = 0 refers to (f0, d0). A false result
/// only means this sufficient test is inconclusive.
bool check_Fi_bounded_sufficient(const ConstraintData& data, std::size_t i);

/// Decides boundedness of F_x = {x in K0 : f0^T x = d0, x in F_i^x} through
/// its recession cone, solved as a small LP.
BoundednessResult check_boundedness(const ConstraintData& data);

/// Some lambda with lambda * d_ref <= d and lambda * f_ref - f in K0*,
/// lambda >= 0 for LambdaSign::Nonneg. The feasible set is an interval built
/// coordinatewise; `slack` widens every bound by that amount (0 for exact
/// checks). The returned value is re-verified before it is handed out.
std::optional<double> scalar_lambda_feasible(const Vector& f_ref, double d_ref, const Vector& f, double d,
                                             const GroundCone& k0, LambdaSign sign, double slack = 0.0);

/// Set-containment certificate for condition iii: branch a (pivot F_0, free
/// multipliers) when F_0 is a genuine constraint, then branch b with pivots
/// ordered by decreasing d_i and then index.
CondIIIResult check_cond_iii(const ConstraintData& data);

/// True iff the certificate's inequalities hold for `data` (1e-12 slack).
bool verify_cond_iii(const ConstraintData& data, const CondIIICertificate& cert);

ConditionReport check_conditions(const ConstraintData& data);

}  // namespace cppc
