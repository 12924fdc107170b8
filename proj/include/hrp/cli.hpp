#pragma once

#include <ostream>

namespace hrp::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kIngest = 3,
    kIo = 4,
};

/// Entry point of the `hrp` command line. Report output without --output goes
/// to `out`; diagnostics and default summaries go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hrp::cli
