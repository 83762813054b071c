// cli.hpp — command dispatch: batch pipelines over the other modules.
// Exit codes: 0 success, 1 solver error, 2 configuration error, 3 failed
// verdict (e.g. certification false under --require-certified).

#pragma once

#include <string>

#include "spherecon/config.hpp"

namespace spherecon {

struct CliOptions {
  std::string out_dir;  // overrides config output.directory when nonempty
  bool require_certified = false;
  int threads = 0;             // 0 = library default
  std::string format = "all";  // json | csv | all
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverError = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitFailedVerdict = 3;

// command in {limit-solve, aux-pot, solve, sweep, certify, kelvin, validate}.
int dispatch(const std::string& command, const RunConfig& cfg, const CliOptions& opt);

}  // namespace spherecon
