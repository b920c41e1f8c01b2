#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foes {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

/// `args` excludes the program name; args[0] is the subcommand. Each
/// subcommand accepts `--config FILE` with `key = value` lines naming the
/// same options as its flags (flags win).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace foes
