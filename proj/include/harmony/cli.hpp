#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace harmony {

/// Runs one command line (without the program name). Returns the exit code:
/// 0 pass / confirmed, 1 fail / hypothesis fails / inconsistent, 2 degenerate or invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace harmony
