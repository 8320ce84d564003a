#pragma once

#include <string>
#include <vector>

#include "bell/io.hpp"

namespace bell::cli {

struct CommandResult {
  io::json payload;     // machine-readable
  std::string table;    // human-readable rendering
  int exit_code = 0;    // 0 computed, 1 input error, 2 solver stall / cap
};

// argv without the program name. Tolerance precedence: --tol flag, then the
// BELLSCOPE_TOL environment variable, then defaults.
CommandResult run(const std::vector<std::string>& args);

}  // namespace bell::cli
