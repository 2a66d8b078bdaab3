#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace etmatch {

/// Runs the command line `args` (args[0] is the program name) with output
/// and diagnostics sent to the given streams. Returns the process exit code:
/// 0 success, 2 input/validation, 3 training data, 4 model mismatch,
/// 5 evaluation input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etmatch
