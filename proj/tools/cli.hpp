#pragma once

#include <string>
#include <vector>

namespace fraudcc::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kParse = 3,
  kSchema = 4,
  kCycle = 5,
};

/// Runs one subcommand; args exclude the program name.
int run(std::vector<std::string> args);

}  // namespace fraudcc::cli
