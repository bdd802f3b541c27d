#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace permlat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Returns 0 on success
/// or a valid input, 1 on invalid input or a failed check, 2 on a usage
/// error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace permlat::cli
