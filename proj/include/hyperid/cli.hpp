#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hyperid {

/// Runs the command line `args` (args[0] is the program name) and returns
/// the process exit status. Subcommands: eval, verify, counterexample,
/// table. The default precision comes from HYPERID_PRECISION when set.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperid
