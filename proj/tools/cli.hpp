#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace specgraph::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;
/// Some inputs of a batch failed; the others were written.
inline constexpr int kPartial = 3;

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specgraph::cli
