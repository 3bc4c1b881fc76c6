#pragma once

#include <iosfwd>

namespace stripforge::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
    kSuccess = 0,
    kCertificationFailed = 1,
    kUsageError = 2,
    kDomainError = 3,
};

/// Entry point of the `stripforge` binary; writes reports to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace stripforge::cli
