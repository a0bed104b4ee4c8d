#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gphi {

/// Subcommands certify, solve, fuzz and report. Returns the process exit
/// code; results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace gphi
