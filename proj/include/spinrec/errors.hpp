#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spinrec {

enum class ErrorKind {
  InvalidArgument,
  SignatureMismatch,
  ParseError,
  NotPseudoOrthogonal,
  Inconsistent,
  NotAVersor,
  EvenCaseNeedsSO,
  CenterProjectionVanishes,
  NoRealRoot,
  VerificationFailed,
  HestenesConditionFailed,
  WrongSignature,
  WrongComponent,
  NotAFrame,
  NotInPin,
  NotInLipschitzGroup,
  MixedParity,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type. `value()` carries the
// offending residual or norm when one exists, NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        double value = std::numeric_limits<double>::quiet_NaN());

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace spinrec
