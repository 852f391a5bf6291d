// SPDX-License-Identifier: Apache-2.0

#include "pindex/error.hpp"

namespace pindex {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotSemidefinite: return "NotSemidefinite";
    case ErrorKind::AllRankDeficient: return "AllRankDeficient";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionLimit: return "DimensionLimit";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

bool Error::is_input_error() const noexcept {
  switch (kind_) {
    case ErrorKind::NonConvergence:
    case ErrorKind::SingularMatrix:
    case ErrorKind::DegenerateInput:
      return false;
    default:
      return true;
  }
}

}  // namespace pindex
