#pragma once

#include <iosfwd>

namespace qthermo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

// Entry point of the `qthermo` tool. Results go to --out or `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qthermo
