#pragma once
#include <ostream>

namespace treecouple::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInvalidConfig = 2,
  kBudgetRefused = 3,
};

/// Whole front end; `out` receives documents and summaries, `err` diagnostics
/// and wall-clock timings.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace treecouple::cli
