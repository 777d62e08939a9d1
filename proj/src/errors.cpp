#include "spinrec/errors.hpp"

namespace spinrec {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotPseudoOrthogonal: return "NotPseudoOrthogonal";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NotAVersor: return "NotAVersor";
    case ErrorKind::EvenCaseNeedsSO: return "EvenCaseNeedsSO";
    case ErrorKind::CenterProjectionVanishes: return "CenterProjectionVanishes";
    case ErrorKind::NoRealRoot: return "NoRealRoot";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::HestenesConditionFailed: return "HestenesConditionFailed";
    case ErrorKind::WrongSignature: return "WrongSignature";
    case ErrorKind::WrongComponent: return "WrongComponent";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::NotInPin: return "NotInPin";
    case ErrorKind::NotInLipschitzGroup: return "NotInLipschitzGroup";
    case ErrorKind::MixedParity: return "MixedParity";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, double value)
    : std::runtime_error(message), kind_(kind), value_(value) {}

}  // namespace spinrec
