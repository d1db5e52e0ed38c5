#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace selfnorm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFailVerdict = 2;

/// Parses argv, runs the selected subcommand and returns the exit status.
/// Tables go to --out (or `out` when absent); messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selfnorm::cli
