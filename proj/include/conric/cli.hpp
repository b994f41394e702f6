#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conric::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_input_error = 1,
    exit_no_solution = 2,
    exit_max_iterations = 3,
    exit_internal = 4,
};

/// Runs one command line. args[0] is the program name. Reports go to out (or
/// the --out file), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conric::cli
