#pragma once

// Command-line front end: `ionbound alpha|beta|bounds|verify|report`.

#include <iosfwd>
#include <string>
#include <vector>

namespace ionbound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

/// Runs one command. `args` excludes the program name. Results go to the
/// `--out` path when given, otherwise to `out`; diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ionbound
