#pragma once

// The qdiv command line, callable in-process so tests can drive it.
//
// Exit codes: 0 success, 1 invalid input or flags, 2 solver failure,
// 3 property-suite failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace qdiv::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kSolver = 2, kSuiteFailed = 3 };

/// args excludes the program name. The report goes to `out` unless --out
/// names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdiv::cli
