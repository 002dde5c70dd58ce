#include "elastica/error.hpp"

namespace elastica {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidWeight: return "invalid-weight";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::NotArcLength: return "not-arc-length";
    case ErrorKind::InsufficientResolution: return "insufficient-resolution";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::ProjectionUndefined: return "projection-undefined";
    case ErrorKind::DegenerateExtraction: return "degenerate-extraction";
    case ErrorKind::NotEvaluable: return "not-evaluable";
    case ErrorKind::InconsistentCertificate: return "inconsistent-certificate";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::SingularState: return "singular-state";
    case ErrorKind::CoordinateBreakdown: return "coordinate-breakdown";
    case ErrorKind::StepSizeFailure: return "step-size-failure";
    case ErrorKind::InvalidBlueprint: return "invalid-blueprint";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace elastica
