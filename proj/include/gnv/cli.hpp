#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gnv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `gnv` invocation. `args` excludes the program name. Returns 0 on success, 1 when a
/// model or numerical error stops the command, 2 on bad usage or an unusable configuration.
///
/// Subcommands: kernel-check, simulate, estimate, experiment, report.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gnv
