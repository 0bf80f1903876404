#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyaut::cli {

/// Exit codes: 0 success, 1 mathematical rejection, 2 usage or parse error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyaut::cli
