#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soata::cli {

enum ExitCode : int { ok = 0, domain = 1, input = 2, internal = 3 };

/// Runs one command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace soata::cli
