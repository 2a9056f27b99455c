#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace guessing::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitCap = 3;

/// Runs one command. `args` excludes the program name. Documents go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace guessing::cli
