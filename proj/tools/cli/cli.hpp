#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace searchspace::cli {

// Process exit statuses.
enum Status : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kInputError = 3,
  kSchemaError = 4,
  kStructuralError = 5,
  kContractError = 6,
  kIoError = 7,
};

/// Runs one command. `args` excludes the program name. Results go to the
/// --output file when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace searchspace::cli
