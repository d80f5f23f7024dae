// The hornalg command line, callable in-process.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace horn {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitParse = 2,
  kExitBudget = 3,
  kExitVerify = 4,
};

// `args` excludes the program name, e.g. {"compose", "a.lp", "b.lp"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace horn
