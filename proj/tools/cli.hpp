#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mobmarket::cli {

enum ExitStatus : int {
  exit_ok = 0,
  exit_verdict_false = 1,  ///< a check failed, solvers disagree, or synthesis is infeasible
  exit_invalid = 2,        ///< usage, syntax or validation error
};

/// Runs one command. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mobmarket::cli
