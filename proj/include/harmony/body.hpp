#pragma once

// Convex bodies in the affine chart of RP^d: membership, chords, hypersections,
// tangent lines from an external point, quadric polarity and quadric fitting.

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "harmony/projective.hpp"

namespace harmony {

// Half-width of the boundary band in the body's defining function.
inline constexpr double kBoundaryBand = 1e-9;
// Chords shorter than this (in chart length) are reported as tangent.
inline constexpr double kTangentLength = 2e-8;

enum class Location { Interior, Boundary, Exterior };

struct Ellipsoid {
  Matrix quadric;  // symmetric, x^T Q x < 0 inside; stored with max-abs entry 1
  Vector interior;
};

struct HPolytope {
  Matrix halfspaces;  // one row (a, b) per facet: a.x + b <= 0
};

struct Superellipsoid {
  Vector center;
  Vector semiaxes;
  double exponent;
};

enum class HyperplaneRelation { Disjoint, Cuts, Supports };

class ConvexBody {
 public:
  using Shape = std::variant<Ellipsoid, HPolytope, Superellipsoid>;

  static ConvexBody ellipsoid(const Matrix& quadric, const Vector& interior);
  /// {x : (x - c)^T A (x - c) <= 1} for symmetric positive definite A.
  static ConvexBody ellipsoid_from_shape(const Vector& center, const Matrix& shape);
  static ConvexBody polytope(const Matrix& halfspaces);
  static ConvexBody superellipsoid(const Vector& center, const Vector& semiaxes, double exponent);

  int dim() const { return static_cast<int>(interior_.size()); }
  const Shape& shape() const { return shape_; }
  const Ellipsoid* as_ellipsoid() const { return std::get_if<Ellipsoid>(&shape_); }
  const Vector& interior_point() const { return interior_; }

  /// Negative inside, zero on the boundary. Ellipsoids are scaled so the value
  /// at the center is -1, polytope facets have unit normals.
  double defining_function(const Vector& x) const;
  Location locate(const Vector& x, double band = kBoundaryBand) const;

  /// Parameters t0 < t1 where base + t * direction crosses the boundary.
  /// Throws LineMissesBody or TangentLine.
  std::pair<double, double> chord_params(const Vector& base, const Vector& direction) const;
  /// Distance from an interior origin to the boundary along a unit direction.
  double ray_exit(const Vector& origin, const Vector& direction) const;
  /// Minimum and maximum of normal.x over the body.
  std::pair<double, double> support_range(const Vector& normal) const;
  HyperplaneRelation relation(const HyperplaneCov& h) const;

 private:
  ConvexBody(Shape shape, Vector interior) : shape_(std::move(shape)), interior_(std::move(interior)) {}

  Shape shape_;
  Vector interior_;
  double quadric_scale_ = 1.0;
  Matrix unit_halfspaces_;
  Matrix vertices_;
};

inline Location contains(const ConvexBody& body, const Vector& x) { return body.locate(x); }

struct ChartLine {
  Vector base;
  Vector direction;  // unit
};

/// Finite base point and unit direction of a line; throws AtInfinity for
/// lines inside the hyperplane at infinity.
ChartLine chart_line(const Flat& line);

/// The two boundary points of the chord L ^ K, ordered by chart parameter.
std::pair<ProjPoint, ProjPoint> chord(const ConvexBody& body, const Flat& line);

/// Boundary points hit by rays from the body's interior point in uniformly
/// distributed directions.
std::vector<Vector> sample_boundary(const ConvexBody& body, std::size_t n, std::uint64_t seed);

// Intersection of a body with a flat, seen from an interior seed point. The
// boundary is star-shaped around the seed, so one radius per direction
// describes it.
class SectionBody {
 public:
  int dim() const { return static_cast<int>(basis_.cols()); }
  const ConvexBody& body() const { return body_; }
  const Flat& flat() const { return flat_; }
  const Vector& seed() const { return seed_; }
  /// Orthonormal d x k basis of the flat's direction space.
  const Matrix& basis() const { return basis_; }

  double radius(const Vector& local_direction) const;
  Vector boundary_point(const Vector& local_direction) const;
  Vector to_local(const Vector& chart) const { return basis_.transpose() * (chart - seed_); }
  Vector from_local(const Vector& local) const { return seed_ + basis_ * local; }

  double flat_distance(const Vector& chart) const;
  /// max(distance to the flat, radial gap to the boundary); zero exactly on
  /// the relative boundary.
  double boundary_distance(const Vector& chart) const;
  /// As above; +infinity for points at infinity.
  double boundary_distance(const ProjPoint& p) const;
  Location locate(const Vector& chart, double band = kBoundaryBand) const;

  /// Evenly spaced angles for 2-dimensional sections, seeded random
  /// directions otherwise.
  std::vector<Vector> sample_boundary(std::size_t n, std::uint64_t seed = 0) const;
  Vector centroid(std::size_t n = 64) const;

 private:
  friend SectionBody hypersection(const ConvexBody&, const Flat&, const ProjPoint&);
  SectionBody(ConvexBody body, Flat flat, Vector seed, Matrix basis)
      : body_(std::move(body)), flat_(std::move(flat)), seed_(std::move(seed)), basis_(std::move(basis)) {}

  ConvexBody body_;
  Flat flat_;
  Vector seed_;
  Matrix basis_;
};

/// K ^ flat around an interior seed on the flat. Throws SeedNotInterior.
SectionBody hypersection(const ConvexBody& body, const Flat& flat, const ProjPoint& seed);

struct TangentLines {
  Flat first;
  Flat second;
  Vector touch_first;  // chart coordinates of the tangency points
  Vector touch_second;
};

/// Support lines of a 2-dimensional section through an apex of its plane
/// (possibly at infinity). Throws ApexInsideSection or ApexOnBoundary.
TangentLines tangent_lines_from_point(const SectionBody& section, const ProjPoint& apex);

HyperplaneCov quadric_polar(const Matrix& quadric, const ProjPoint& p);
/// Throws SingularQuadric.
ProjPoint quadric_pole(const Matrix& quadric, const HyperplaneCov& h);

/// Symmetrized, unit Frobenius norm, sign chosen so the leading d x d block has positive trace.
Matrix normalize_quadric(const Matrix& quadric);
/// Distance between normalized quadrics, insensitive to sign.
double quadric_distance(const Matrix& a, const Matrix& b);
/// True when the quadric bounds a nondegenerate real ellipsoid in the chart.
bool has_ellipsoid_signature(const Matrix& quadric);

struct QuadricFit {
  Matrix quadric;   // normalized, chart coordinates
  double residual;  // RMS algebraic error on normalized samples
  bool ellipsoid_signature;

  bool ellipsoid_compatible(double tol = 1e-6) const { return ellipsoid_signature && residual < tol; }
};

/// Least-squares algebraic quadric through chart samples. Throws
/// InsufficientSamples or DegenerateSampleSet.
QuadricFit fit_quadric(std::span<const Vector> samples);

}  // namespace harmony
