#pragma once

#include <stdexcept>

namespace copula_ot::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,
  kMissingHypothesis = 3,
  kCapacity = 4,
  kCheckFailed = 5,
};

/// Malformed or inconsistent user input (exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace copula_ot::cli
