#include "harmony/error.hpp"

namespace harmony {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::AtInfinity: return "AtInfinity";
    case ErrorCode::NotInFlat: return "NotInFlat";
    case ErrorCode::EmptyMeet: return "EmptyMeet";
    case ErrorCode::LineInHyperplane: return "LineInHyperplane";
    case ErrorCode::NotCollinear: return "NotCollinear";
    case ErrorCode::IndeterminateRatio: return "IndeterminateRatio";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::DegenerateQuadrangle: return "DegenerateQuadrangle";
    case ErrorCode::NotAPencil: return "NotAPencil";
    case ErrorCode::TransversalInPencilMember: return "TransversalInPencilMember";
    case ErrorCode::CenterOnAxis: return "CenterOnAxis";
    case ErrorCode::InvalidBody: return "InvalidBody";
    case ErrorCode::LineMissesBody: return "LineMissesBody";
    case ErrorCode::TangentLine: return "TangentLine";
    case ErrorCode::SeedNotInterior: return "SeedNotInterior";
    case ErrorCode::ApexInsideSection: return "ApexInsideSection";
    case ErrorCode::ApexOnBoundary: return "ApexOnBoundary";
    case ErrorCode::SingularQuadric: return "SingularQuadric";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateSampleSet: return "DegenerateSampleSet";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::PointOnPolar: return "PointOnPolar";
    case ErrorCode::PointNotInterior: return "PointNotInterior";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::FixtureViolation: return "FixtureViolation";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::ApexDegenerate: return "ApexDegenerate";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
  }
  return "Unknown";
}

GeometryError::GeometryError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace harmony
