#pragma once

#include <ostream>

namespace rgfp::cli {

// Parses argv, runs one subcommand and returns the exit code: 0 success, 1 usage or
// configuration error, 2 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rgfp::cli
