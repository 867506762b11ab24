#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcompat::cli {

enum ExitCode : int {
  kOk = 0,
  kOtherError = 1,
  kInvalidInput = 2,
  kNumericalLimit = 3,
};

/// Runs one command. `args` excludes the program name. Reports go to `out` unless --out is
/// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qcompat::cli
