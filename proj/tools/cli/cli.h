#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace copula_ot::cli {

/// Default relative tolerance for cross-method agreement.
inline constexpr double kDefaultTolerance = 1e-8;

/// Process environment the tool depends on.
struct Environment {
  /// Raw value of COPULA_OT_TOLERANCE, if set.
  std::optional<std::string> tolerance;

  static Environment from_process();
};

/// Runs one command line (without the program name) and returns the exit
/// code. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

}  // namespace copula_ot::cli
