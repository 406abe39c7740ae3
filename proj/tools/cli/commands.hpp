#pragma once

#include <iosfwd>

namespace weylkit::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kComputation = 2, kVerificationFailed = 3 };

/// Entry point of the weylkit executable; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace weylkit::cli
