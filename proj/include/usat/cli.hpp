#ifndef USAT_CLI_HPP_
#define USAT_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace usat {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFindings = 1,  // validation errors, unparsable document
  kExitUsage = 2,
  kExitIo = 3,
  kExitRunner = 4,
};

// Entry point behind the `usat` executable. args excludes the program name.
// Subcommands: init, validate, sbd, factors, screen, delay, report.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace usat

#endif  // USAT_CLI_HPP_
