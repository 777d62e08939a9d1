#pragma once

#include <iosfwd>

#include "spinrec/errors.hpp"

namespace spinrec::cli {

// Exit codes of the spinrec tool.
enum ExitCode : int {
  kOk = 0,
  kSelftestFailed = 1,
  kParseError = 2,
  kNotPseudoOrthogonal = 3,
  kCenterVanishes = 4,
  kVerificationFailed = 5,
  kWrongComponent = 6,
};

int exit_code_for(ErrorKind kind);

/// Runs the command line `argv` writing results to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinrec::cli
