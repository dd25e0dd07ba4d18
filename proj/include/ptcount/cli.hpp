#pragma once

#include <string>
#include <vector>

namespace ptcount::cli {

/// Exit codes: 0 success, 2 invalid input, 3 search exhausted, 4 internal error.
int run(int argc, char** argv);
/// Arguments after the program name.
int run(const std::vector<std::string>& args);

}  // namespace ptcount::cli
