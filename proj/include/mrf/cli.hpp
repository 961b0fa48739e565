#pragma once

#include <iosfwd>

namespace mrf {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,        // malformed input or arguments
  kExitCap = 2,          // a resource cap was hit
  kExitReconstruct = 3,  // reconstruction failed or was ambiguous
};

/// Entry point of the `mrf` tool; output goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mrf
