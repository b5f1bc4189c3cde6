#include "harmony/homology.hpp"

namespace harmony {

HarmonicHomology::HarmonicHomology(HyperplaneCov axis, ProjPoint center)
    : axis_(std::move(axis)), center_(std::move(center)) {
  if (axis_.ambient_dim() != center_.ambient_dim()) {
    throw GeometryError(ErrorCode::DegenerateInput, "axis and center live in different spaces");
  }
  if (axis_.contains(center_)) throw GeometryError(ErrorCode::CenterOnAxis, "center lies on the axis");
  const Vector& g = axis_.coords();
  const Vector& tau = center_.coords();
  const auto n = g.size();
  matrix_ = g.dot(tau) * Matrix::Identity(n, n) - 2.0 * tau * g.transpose();
}

ProjPoint HarmonicHomology::apply(const ProjPoint& x) const { return ProjPoint(matrix_ * x.coords()); }

HyperplaneCov HarmonicHomology::apply(const HyperplaneCov& h) const {
  return HyperplaneCov(matrix_.transpose() * h.coords());
}

Flat HarmonicHomology::apply(const Flat& f) const { return Flat::from_span(matrix_ * f.span()); }

HarmonicHomology make_homology(const HyperplaneCov& axis, const ProjPoint& center) {
  return HarmonicHomology(axis, center);
}

HarmonicHomology homology_from_affine_reflection(const HyperplaneCov& hyperplane, const Vector& direction) {
  if (direction.size() != hyperplane.ambient_dim()) {
    throw GeometryError(ErrorCode::DegenerateInput, "direction has the wrong dimension");
  }
  if (!(direction.norm() > kZeroTolerance)) throw GeometryError(ErrorCode::ZeroVector, "zero direction");
  const auto normal = hyperplane.coords().head(direction.size());
  if (normal.norm() <= kZeroTolerance ||
      std::abs(normal.normalized().dot(direction.normalized())) <= kIncidenceTolerance) {
    throw GeometryError(ErrorCode::CenterOnAxis, "direction is parallel to the hyperplane");
  }
  return HarmonicHomology(hyperplane, ProjPoint::at_infinity(direction));
}

}  // namespace harmony
