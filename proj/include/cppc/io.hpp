#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cppc/completion.hpp"
#include "cppc/cones.hpp"
#include "cppc/matrix.hpp"
#include "cppc/qp_relax.hpp"

namespace cppc {

/// Malformed or inconsistent input. The message carries line/column for
/// syntax errors and the offending key otherwise.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// Deterministic rendering: keys sorted, doubles at 17 significant digits,
/// non-finite doubles as null.
std::string dump_json(const Json& j, int indent = 2);

GroundCone cone_from_json(const Json& j);
Json cone_to_json(const GroundCone& k);

PartialMatrix partial_matrix_from_json(const Json& j);
Json partial_matrix_to_json(const PartialMatrix& pm);

/// PartialMatrix keys plus optional f, g, d, f0, d0, K. K defaults to the
/// orthant. Data (if any) refers to the matrix after its NW corner has been
/// scaled to 1.
CompletionProblem completion_problem_from_json(const Json& j);

QPInstance qp_from_json(const Json& j);
Json qp_to_json(const QPInstance& qp);

Json constraint_data_to_json(const ConstraintData& data);
Json membership_to_json(const MembershipVerdict& m);
Json certificate_to_json(const CompletabilityCertificate& c);
Json completion_result_to_json(const CompletionResult& r);
Json solve_result_to_json(const SolveResult& r);
Json exactness_report_to_json(const ExactnessReport& r);
Json oracle_result_to_json(const OracleResult& r);

Json matrix_to_json(const Matrix& m);
Json vector_to_json(const Vector& v);

}  // namespace cppc
