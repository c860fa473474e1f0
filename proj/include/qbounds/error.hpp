#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbounds {

enum class ErrorCode {
  InvalidSupport,
  InvalidGrid,
  GridMismatch,
  NonPositiveQfi,
  UnnormalizedPrior,
  SingularSystem,
  DomainError,
  ZeroEvidence,
  ConvergenceFailure,
  ConfigError,
  UnsupportedExample,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception; `code()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qbounds
