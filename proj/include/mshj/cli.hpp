#pragma once

// Command-line front end. Exit codes: 0 pass, 1 residual failure, 2 config or
// parse error, 3 numerical failure.

#include <ostream>
#include <string>
#include <vector>

namespace mshj {

enum ExitCode : int { kPass = 0, kResidualFailure = 1, kInputError = 2, kNumericalFailure = 3 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mshj
