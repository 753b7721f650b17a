#include "cdineq/errors.hpp"
#include "cdineq/rational.hpp"

namespace cdineq {

const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::NonUnitLeadingCoefficient: return "NonUnitLeadingCoefficient";
    case ErrorKind::WildCharacteristic: return "WildCharacteristic";
    case ErrorKind::WildRamification: return "WildRamification";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::DivergentSubstitution: return "DivergentSubstitution";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::ExtensionDegreeExceeded: return "ExtensionDegreeExceeded";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Error";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::ExtensionDegreeExceeded:
    case ErrorKind::DepthExceeded:
      return 3;
    case ErrorKind::InvariantViolation:
      return 4;
    default:
      return 2;
  }
}

void fail(ErrorKind k, const std::string& msg) { throw Error(k, std::string(error_name(k)) + ": " + msg); }

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    fail(ErrorKind::InvalidArgument, "not a rational: '" + s + "'");
  }
}

QInf parse_qinf(const std::string& s) {
  if (s == "inf") return QInf::infinity();
  return QInf(parse_rat(s));
}

}  // namespace cdineq
