#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace regrew {

/// Exit codes: 0 success or equal, 1 negative finding or invalid input,
/// 2 resource limit or inconclusive, 3 usage error.
enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitInconclusive = 2, kExitUsage = 3 };

/// Runs one `regrew` invocation. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regrew
