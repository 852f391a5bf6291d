// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pindex {

enum class ErrorKind {
  InvalidInput,
  NonConvergence,
  SingularMatrix,
  NotPositiveDefinite,
  NotSemidefinite,
  AllRankDeficient,
  DomainError,
  DegenerateInput,
  HypothesisViolated,
  TooFewPoints,
  ParseError,
  DimensionLimit,
  IOError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Errors caused by bad user input (files, flags, violated preconditions),
  /// as opposed to numerical breakdown.
  bool is_input_error() const noexcept;

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace pindex
