#pragma once

#include <stdexcept>
#include <string>

namespace cdineq {

enum class ErrorKind {
  Syntax,
  NotSquarefree,
  NonUnitLeadingCoefficient,
  WildCharacteristic,
  WildRamification,
  NotAUnit,
  DivergentSubstitution,
  NotInvertible,
  InvalidArgument,
  PrecisionExhausted,
  ExtensionDegreeExceeded,
  DepthExceeded,
  InvariantViolation,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// 2: bad input, 3: a resource cap was hit, 4: an internal check failed.
int exit_code(ErrorKind k);

[[noreturn]] void fail(ErrorKind k, const std::string& msg);

inline void check_invariant(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::InvariantViolation, msg);
}

}  // namespace cdineq
