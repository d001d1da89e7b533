#pragma once

#include <iosfwd>

namespace confirm::cli {

/// Exit codes: 0 success (for `assess`: transition recommended), 1 transition
/// not recommended, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotRecommended = 1;
inline constexpr int kExitError = 2;

/// Entry point shared by the confirm binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confirm::cli
