#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

enum class ErrorKind {
  InvalidArgument,
  InvalidWeight,
  Dimension,
  NotArcLength,
  InsufficientResolution,
  Infeasible,
  ProjectionUndefined,
  DegenerateExtraction,
  NotEvaluable,
  InconsistentCertificate,
  Domain,
  SingularState,
  CoordinateBreakdown,
  StepSizeFailure,
  InvalidBlueprint,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace elastica
