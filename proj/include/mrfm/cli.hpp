#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mrfm::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Runs one CLI invocation. args is the full argv including the program
/// name. Returns the process exit code: 0 success, 2 usage/config error,
/// 1 runtime error.
int run_command(const std::vector<std::string>& args);

}  // namespace mrfm::cli
