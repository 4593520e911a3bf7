#pragma once

// Command-line front end. Subcommands: simulate, sample, density, compare,
// regime, selfcheck. Settings come from a JSON --config file and from flags;
// flags win. Exit codes: 0 success, 1 a statistical threshold failed,
// 2 usage or configuration error.

#include <ostream>
#include <string>
#include <vector>

namespace opdyn::cli {

inline constexpr int kOk = 0;
inline constexpr int kStatFailure = 1;
inline constexpr int kConfigError = 2;

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opdyn::cli
