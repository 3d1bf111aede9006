#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlqc::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kBudgetExhausted = 2 };

// Runs one CLI invocation. argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlqc::cli
