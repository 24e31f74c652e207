#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace windfarm::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kIntegrationFailure = 2,
  kEquivalenceFailure = 3,
};

/// Runs `windfarm-rom <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace windfarm::cli
