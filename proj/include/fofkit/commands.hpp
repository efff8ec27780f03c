#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fofkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitGeometry = 2;
inline constexpr int kExitFormat = 3;

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit code; diagnostics go to `err`, reports to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fofkit
