#pragma once

#include <stdexcept>
#include <string>

namespace plflow {

enum class ErrorKind {
  TooFewNodes,
  DegenerateCurve,
  InvalidArgument,
  NumericalFailure,
  SingularSolve,
  InsufficientRecords,
  MissingSnapshots,
  HypothesisNotMet,
  NonPositiveField,
  ZeroFunction,
  ClosureFailed,
  InvalidWinding,
  TargetUnreachable,
  ParseError,
  ValidationError,
  MalformedTrajectory,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Exception carrying a machine-checkable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace plflow
