#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vcoop {

/// Exit codes: 0 success, 1 validation or usage error, 2 runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one verb. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vcoop
