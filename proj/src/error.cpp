#include "plflow/error.hpp"

namespace plflow {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TooFewNodes: return "TooFewNodes";
    case ErrorKind::DegenerateCurve: return "DegenerateCurve";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::SingularSolve: return "SingularSolve";
    case ErrorKind::InsufficientRecords: return "InsufficientRecords";
    case ErrorKind::MissingSnapshots: return "MissingSnapshots";
    case ErrorKind::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorKind::NonPositiveField: return "NonPositiveField";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::ClosureFailed: return "ClosureFailed";
    case ErrorKind::InvalidWinding: return "InvalidWinding";
    case ErrorKind::TargetUnreachable: return "TargetUnreachable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::MalformedTrajectory: return "MalformedTrajectory";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace plflow
