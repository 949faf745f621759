#pragma once

#include <iosfwd>

namespace folio {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitTrue = 0,
  kExitOk = 0,
  kExitFalse = 1,
  kExitError = 2,
  kExitLimit = 3,
  kExitViolation = 4,
};

// Entry point of the `folio` tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace folio
