#include "dioph/error.hpp"

namespace dioph {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BallStraddlesZero: return "BallStraddlesZero";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::UnknownConstant: return "UnknownConstant";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::EmptyLattice: return "EmptyLattice";
    case ErrorKind::NonPrimitive: return "NonPrimitive";
    case ErrorKind::ImproperIntersection: return "ImproperIntersection";
    case ErrorKind::IndeterminateBranch: return "IndeterminateBranch";
    case ErrorKind::IndeterminateComparison: return "IndeterminateComparison";
    case ErrorKind::EqualPoints: return "EqualPoints";
    case ErrorKind::UnsupportedCycle: return "UnsupportedCycle";
    case ErrorKind::InvalidCalibration: return "InvalidCalibration";
    case ErrorKind::ZeroSize: return "ZeroSize";
    case ErrorKind::ThetaNotGeneric: return "ThetaNotGeneric";
    case ErrorKind::SearchStalled: return "SearchStalled";
    case ErrorKind::ProjectionMismatch: return "ProjectionMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace dioph
