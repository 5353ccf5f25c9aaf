#pragma once

#include <ostream>

namespace spl::cli {

enum ExitCode { kOk = 0, kParameterError = 2, kNumericalError = 3, kUsage = 64 };

// Whole command line; reports go to `out` (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spl::cli
