#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace def::cli {

// Runs the `def` command line. Results go to `out`, diagnostics to `err`.
// Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

// Subcommand names and the --help text for each, for the help self-test.
std::vector<std::string> subcommand_names();
std::string help_text(const std::string& subcommand);
std::vector<std::string> declared_flags(const std::string& subcommand);

}  // namespace def::cli
