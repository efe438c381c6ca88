#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace christoffel::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kSuccess = 0, kVerdictFail = 1, kInputError = 2 };

/// Settings normally taken from the process environment.
struct Environment {
    /// Raw value of CHRISTOFFEL_TOL, if set.
    std::optional<std::string> tolerance;
};

/// Runs one command. `args` excludes the program name. A JSON report is
/// always written to `out`; diagnostics go to `err`. `in` is read when the
/// file argument is "-".
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        const Environment& env = {});

}  // namespace christoffel::cli
