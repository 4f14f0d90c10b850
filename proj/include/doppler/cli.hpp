#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace doppler {

/// Exit statuses of the command-line front end.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `doppler` executable. `args` excludes the program
/// name. Subcommands: run, check-all, export-kernel, version.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace doppler
