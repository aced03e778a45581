#pragma once

#include <vector>
#include <string>

namespace wardtrack::cli {

// Full command-line entry point; returns the process exit code.
// 0 success, 1 usage, 2 bad data, 3 broken invariant.
int run(const std::vector<std::string>& args);

} // namespace wardtrack::cli
