#pragma once

#include <iosfwd>

namespace llspec {

// Command-line entry point. Exit codes: 0 success, 2 parameter error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace llspec
