#pragma once

#include <iosfwd>

namespace curvemates {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  exit_pass = 0,
  exit_fail = 1,
  exit_audit_flag = 2,
  exit_usage = 64,      // bad arguments, malformed input files
  exit_data = 65,       // alignment, regularity and other computation errors
};

/// Runs `curvemates <command> ...`. Never throws; errors go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvemates
