#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dioph {

/// Failure categories surfaced by the library. The CLI maps these onto exit
/// codes and step tags; tests match on them.
enum class ErrorKind {
  BallStraddlesZero,
  DomainError,
  UnknownConstant,
  PrecisionExhausted,
  DimensionMismatch,
  SingularGram,
  EmptyLattice,
  NonPrimitive,
  ImproperIntersection,
  IndeterminateBranch,
  IndeterminateComparison,
  EqualPoints,
  UnsupportedCycle,
  InvalidCalibration,
  ZeroSize,
  ThetaNotGeneric,
  SearchStalled,
  ProjectionMismatch,
  PreconditionViolated,
  ParseError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace dioph
