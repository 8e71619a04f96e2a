#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace openlex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. Reports go to `out` (or --out), diagnostics to
/// `err`. Returns 0 on success, 1 on failure, 2 on a usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace openlex::cli
