#ifndef RULEMINE_CLI_HPP
#define RULEMINE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace rulemine::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,   // schema, parse or data problems
  kConfigError = 2,  // bad flags or configuration values
  kNoRules = 3,      // training finished without a single rule
};

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rulemine::cli

#endif
