#pragma once

#include <iosfwd>

namespace invscat::cli {

enum ExitCode { kOk = 0, kUsage = 2, kForwardFailure = 3, kInversionFailure = 4 };

/// Entry point of the command-line tool; subcommands forward, invert, compare.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace invscat::cli
