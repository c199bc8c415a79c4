#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace octa::cli {

enum ExitCode : int {
  kOk = 0,
  kInfeasible = 1,  // plan infeasible, or a failed acceptance check
  kInputError = 2,
  kStructureViolation = 3,
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace octa::cli
