#pragma once

#include <string>
#include <vector>

namespace chromasim::cli {

/// Runs the command line; returns the process exit code
/// (0 ok, 1 input error, 2 partial failure).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace chromasim::cli
