#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace harmony {

enum class ErrorCode {
  ZeroVector,
  AtInfinity,
  NotInFlat,
  EmptyMeet,
  LineInHyperplane,
  NotCollinear,
  IndeterminateRatio,
  DegeneratePair,
  DegenerateQuadrangle,
  NotAPencil,
  TransversalInPencilMember,
  CenterOnAxis,
  InvalidBody,
  LineMissesBody,
  TangentLine,
  SeedNotInterior,
  ApexInsideSection,
  ApexOnBoundary,
  SingularQuadric,
  InsufficientSamples,
  DegenerateSampleSet,
  CoincidentPoints,
  PointOnPolar,
  PointNotInterior,
  DegenerateAxis,
  FixtureViolation,
  SearchFailed,
  ApexDegenerate,
  DegenerateInput,
  ParseError,
  ValidationError,
  RetryExhausted,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace harmony
