#pragma once

#include <string>
#include <vector>

#include "mlwave/scenario.hpp"

namespace mlwave {

/// Process exit codes of the command-line workflows.
enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,       // bad flags, scenario parse/validation errors
  kIo = 3,          // unreadable input, unwritable output directory
  kInfeasible = 4,  // the solver certified infeasibility
  kSolver = 5,      // iteration limit or a post-solve check failed
};

ExitCode exit_code_for(ErrorCode code);

struct RunOutcome {
  ExitCode code = ExitCode::kOk;
  std::string message;             // diagnostic for nonzero codes
  std::vector<std::string> files;  // written outputs, CSV first then run_log.json
};

/// Subcommands: "single", "robust", "pareto", "simulate". Creates `output_dir` if absent and
/// writes <subcommand>.csv plus run_log.json. Never throws.
RunOutcome run(const std::string& subcommand, const Scenario& scenario,
               const std::string& output_dir);

/// `%.12g`, the number format of every CSV cell.
std::string csv_number(double x);

}  // namespace mlwave
