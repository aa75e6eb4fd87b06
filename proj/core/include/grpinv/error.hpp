#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace grpinv {

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  NonSquare,
  Singular,
  NonConvergence,
  NotGroupInvertible,
  IllConditionedCore,
  ConditionViolated,
  UnsupportedLambda,
  LambdaIsMinusOne,
  HypothesisViolated,
  NotIdempotent,
  RankPatternViolated,
  UnsupportedMode,
  UnknownTheorem,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `details` carries numeric payload
// (ranks, residuals) so callers such as the CLI can echo it without parsing
// the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::map<std::string, double> details = {})
      : std::runtime_error(what), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::map<std::string, double>& details() const noexcept {
    return details_;
  }

 private:
  ErrorCode code_;
  std::map<std::string, double> details_;
};

}  // namespace grpinv
