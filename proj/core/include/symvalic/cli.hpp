#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symvalic::cli {

enum ExitCode : int {
  kClean = 0,
  kWarnings = 1,
  kUsage = 2,
  kTruncated = 3,
};

/// Runs one command; `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symvalic::cli
