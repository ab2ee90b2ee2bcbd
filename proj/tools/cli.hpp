#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ebc::cli {

enum ExitStatus : int {
  kOk = 0,
  kValidationError = 1,
  kDecodeFailure = 2,
};

// args[0] is the program name. Documents go to `out`, diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebc::cli
