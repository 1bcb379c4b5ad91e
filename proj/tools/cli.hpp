#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace kv::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kSuiteFailures = 1,
  kUsageError = 2,
  kInvalidTransition = 3,
  kInternalError = 4,
};

/// Runs one `kv` invocation. `args` excludes the program name. Prompts for
/// missing gate criteria read from `in`.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr,
        std::istream& in = std::cin);

}  // namespace kv::cli
