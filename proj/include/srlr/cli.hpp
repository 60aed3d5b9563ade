#pragma once

#include <string>
#include <vector>

namespace srlr::cli {

/// Entry point behind the srlr executable. Exit codes: 0 success, 1 usage or
/// parse errors, 2 computational errors; messages go to standard error.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace srlr::cli
