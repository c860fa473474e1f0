#include "qbounds/error.hpp"

namespace qbounds {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidSupport: return "InvalidSupport";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonPositiveQfi: return "NonPositiveQfi";
    case ErrorCode::UnnormalizedPrior: return "UnnormalizedPrior";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UnsupportedExample: return "UnsupportedExample";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qbounds
