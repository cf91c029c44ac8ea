#pragma once

// Command-line front end: `siglab exp1|exp2|exp3|dist ...`.
//
// Exit codes: 0 success, 2 usage or configuration error, 1 internal error.

#include <ostream>
#include <string>
#include <vector>

namespace siglab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultSeed = 2022;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace siglab::cli
