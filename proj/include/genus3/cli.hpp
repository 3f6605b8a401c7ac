#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace genus3::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;
inline constexpr int kNotConsistent = 2;
inline constexpr int kInvalidInput = 3;
inline constexpr int kFormatError = 4;

// Runs one subcommand; args exclude the program name. Results go to `out`
// (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace genus3::cli
