#pragma once

#include <ostream>

namespace spinwire::cli {

enum ExitCode : int { kOk = 0, kToleranceFailure = 1, kInputError = 2, kBudgetWarning = 3 };

// Entry point of the `spinwire` tool. Tables go to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spinwire::cli
