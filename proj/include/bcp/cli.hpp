#pragma once

#include "bcp/error.hpp"
#include "bcp/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bcp::cli {

enum ExitCode : int {
    kSuccess = 0,
    kArgumentError = 2,
    kNumericFailure = 3,
    kInvalidBoundary = 4,
};

int exit_code(ErrorKind kind) noexcept;

/// Builds the process, reduces it when needed, brackets the boundaries and
/// runs the estimator. `threads` = 0 means hardware concurrency.
RunReport execute(const RunRequest& request, unsigned threads = 0);

inline constexpr std::uint64_t kReferenceSeed = 20240607;

/// The four reference runs: OU and growth square-root boundaries, GBM with a
/// time-varying rate, and the Daniels boundary.
std::vector<RunRequest> reference_requests(std::uint64_t seed = kReferenceSeed);

/// Worker lanes from BCP_THREADS (unset or 0 = auto).
unsigned threads_from_environment();

/// Entry point; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcp::cli
