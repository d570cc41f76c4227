#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patsim {

/// Parses arguments (without the program name) and runs one subcommand. Returns the process exit code; errors
/// are reported on `err` as "stage=<command> error=<kind> message=...".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patsim
