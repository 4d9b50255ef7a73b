#pragma once

#include <string>
#include <vector>

namespace scenerylab::cli {

// Entry point of the scenerylab tool. Returns the process exit code:
// 0 success, 2 config error, 3 numeric error, 1 anything else.
int run(int argc, const char* const* argv);

// Convenience overload used by tests.
int run(const std::vector<std::string>& args);

}  // namespace scenerylab::cli
