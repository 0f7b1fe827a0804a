#pragma once

#include <ostream>

namespace cclt {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2, kVerifyFailed = 3 };

/// Entry point of the cascade_clt tool; progress goes to `out`, errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cclt
