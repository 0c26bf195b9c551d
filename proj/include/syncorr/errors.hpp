#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace syncorr {

/// Error carrying the name of the violated constraint family, so callers
/// (and the CLI) can report which check failed without parsing messages.
class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(std::string constraint, const std::string& message)
      : std::runtime_error(message), constraint_(std::move(constraint)) {}

  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

/// A named constraint violation with its measured residual.
struct Violation {
  std::string constraint;
  std::string detail;
  double residual = 0.0;
};

}  // namespace syncorr
