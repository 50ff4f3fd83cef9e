#pragma once

#include <string>
#include <vector>

namespace tomo::cli {

/// Subcommand dispatch. Exit codes: 0 success, 1 usage/config error,
/// 2 numerical non-convergence, 3 I/O error.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, const char* const* argv);

}  // namespace tomo::cli
