#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace cppc {

struct RunConfig {
  std::string command;  // check | complete | solve-qp | oracle
  std::string input;
  std::string output;   // empty: stdout
  std::optional<double> tol;
  std::optional<int> max_iters;
  std::uint64_t seed = 0;
  bool quiet = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// Runs one command: JSON report to `out` (or the output file), a short
/// human summary to `err` unless quiet.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and calls run.
int cli_main(int argc, char** argv);

}  // namespace cppc
