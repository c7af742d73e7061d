#pragma once

#include <iosfwd>

namespace zmeq::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNoConvergence = 2,
  kResponsiveness = 3,
  kNonFinite = 4,
  kViolations = 5,
  kUsage = 6,
  kInternal = 7,
  kOutputError = 8,
};

/// Entry point of the command-line tool. The report goes to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zmeq::cli
