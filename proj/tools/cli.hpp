#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pfc3d::cli {

enum ExitCode : int {
  kOk = 0,
  kSolverFailure = 1,
  kConfigError = 2,
  kVerificationFailure = 3,
};

/// Entry point of the pfc3d tool. args[0] is the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pfc3d::cli
