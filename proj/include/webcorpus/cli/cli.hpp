#pragma once

#include <chrono>
#include <iosfwd>
#include <string_view>

namespace webcorpus {

// Runs the command line tool. Returns the process exit code: 0 on success,
// 1 when the command failed or found problems, 2 for usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "30s", "500ms", "2m" or a bare number of seconds. Throws
// Error(kInvalidArgument).
std::chrono::milliseconds parse_duration(std::string_view text);

}  // namespace webcorpus
