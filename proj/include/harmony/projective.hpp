#pragma once

// Homogeneous-coordinate geometry of real projective space RP^d.
//
// Points and hyperplanes are stored as (d+1)-vectors in canonical form: the
// largest-magnitude coordinate has absolute value 1 and the first nonzero
// coordinate is positive. The affine chart is the set of points whose last
// coordinate is nonzero; chart coordinates are x / x[d].

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "harmony/error.hpp"

namespace harmony {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Below this max-abs magnitude a homogeneous vector is treated as zero.
inline constexpr double kZeroTolerance = 1e-15;
// Rank decisions keep singular values above this fraction of the largest.
inline constexpr double kRankTolerance = 1e-9;
// Incidence |h.x| / (|h||x|) below this counts as "on".
inline constexpr double kIncidenceTolerance = 1e-9;

/// Rescales a nonzero homogeneous vector to canonical form.
/// Throws ZeroVector when every entry is below kZeroTolerance.
Vector canonicalize(const Vector& raw);

class ProjPoint {
 public:
  explicit ProjPoint(const Vector& raw);

  static ProjPoint from_chart(const Vector& x);
  static ProjPoint at_infinity(const Vector& direction);

  const Vector& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()) - 1; }
  Vector unit() const { return coords_.normalized(); }

  bool is_finite(double tol = 1e-12) const;
  /// Chart coordinates; throws AtInfinity for points on the hyperplane at infinity.
  Vector chart() const;

 private:
  Vector coords_;
};

class HyperplaneCov {
 public:
  explicit HyperplaneCov(const Vector& raw);

  /// The hyperplane n.x + offset = 0 of the chart.
  static HyperplaneCov from_chart(const Vector& normal, double offset);
  static HyperplaneCov at_infinity(int d);

  const Vector& coords() const { return coords_; }
  int ambient_dim() const { return static_cast<int>(coords_.size()) - 1; }
  Vector unit() const { return coords_.normalized(); }

  /// Normalized evaluation h.x / (|h||x|), in [-1, 1].
  double evaluate(const ProjPoint& p) const;
  bool contains(const ProjPoint& p, double tol = kIncidenceTolerance) const;

 private:
  Vector coords_;
};

/// Sine of the angle between representatives; 0 iff the points coincide.
double distance(const ProjPoint& a, const ProjPoint& b);
double distance(const HyperplaneCov& a, const HyperplaneCov& b);

bool same_point(const ProjPoint& a, const ProjPoint& b, double tol = kRankTolerance);
bool same_hyperplane(const HyperplaneCov& a, const HyperplaneCov& b, double tol = kRankTolerance);

// A k-dimensional projective subspace, kept as orthonormal bases of its span
// (k+1 columns) and of its annihilator (d-k columns).
class Flat {
 public:
  static Flat from_span(const Matrix& columns);
  static Flat from_dual(const Matrix& columns);
  static Flat point(const ProjPoint& p);
  static Flat hyperplane(const HyperplaneCov& h);
  /// L(a, b); throws DegeneratePair when a == b.
  static Flat line(const ProjPoint& a, const ProjPoint& b);

  int dim() const { return static_cast<int>(span_.cols()) - 1; }
  int ambient_dim() const { return static_cast<int>(span_.rows()) - 1; }

  const Matrix& span() const { return span_; }
  const Matrix& dual() const { return dual_; }
  std::vector<ProjPoint> span_points() const;
  std::vector<HyperplaneCov> dual_covectors() const;

  bool contains(const ProjPoint& p, double tol = kIncidenceTolerance) const;
  bool contains(const Flat& f, double tol = kIncidenceTolerance) const;

  /// Requires dim() == 0.
  ProjPoint as_point() const;
  /// Requires dim() == d - 1.
  HyperplaneCov as_hyperplane() const;

 private:
  Flat(Matrix span, Matrix dual) : span_(std::move(span)), dual_(std::move(dual)) {}

  Matrix span_;
  Matrix dual_;
};

Flat join(std::span<const Flat> items);
Flat join(const Flat& a, const Flat& b);
Flat join(const Flat& a, const ProjPoint& p);
Flat join(const ProjPoint& a, const ProjPoint& b);

/// Throws EmptyMeet when the flats do not intersect.
Flat meet(const Flat& a, const Flat& b);
Flat meet(const Flat& a, const HyperplaneCov& h);

/// Intersection point of a line with a hyperplane. Throws LineInHyperplane
/// when the line lies inside h.
ProjPoint intersect(const Flat& line, const HyperplaneCov& h);

// Projective scalar lambda:mu, normalized to unit length with mu >= 0.
class CrossRatioValue {
 public:
  CrossRatioValue(double lambda, double mu);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  bool is_infinite(double tol = 1e-15) const { return std::abs(mu_) <= tol; }
  /// lambda / mu; +infinity when mu == 0.
  double value() const;
  /// Chordal distance to -1 on the projective line, in [0, 1].
  double harmonic_deviation() const;
  bool is_harmonic(double tol = 1e-9) const { return harmonic_deviation() < tol; }

 private:
  double lambda_;
  double mu_;
};

/// Chordal distance between two projective scalars, in [0, 1].
double chordal_distance(const CrossRatioValue& a, const CrossRatioValue& b);

/// Cross ratio of four points given as homogeneous coordinates on RP^1
/// (entries (t, 1) for finite parameters and (1, 0) for infinity).
CrossRatioValue cross_ratio_1d(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                               const Eigen::Vector2d& c, const Eigen::Vector2d& d);

/// [a, b; c, d] = ((c-a)/(c-b)) / ((d-a)/(d-b)); -1 exactly for harmonic quadruples.
CrossRatioValue cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                            const ProjPoint& d);

/// The unique d with [a, b; c, d] = -1.
ProjPoint harmonic_conjugate(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c);

struct DiagonalPoints {
  ProjPoint p;  // L(a,b) ^ L(c,d)
  ProjPoint q;  // L(a,c) ^ L(d,b)
  ProjPoint r;  // L(a,d) ^ L(b,c)
};

DiagonalPoints complete_quadrangle(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                                   const ProjPoint& d);

/// Cross ratio of the four points where the transversal line meets the
/// hyperplanes of a pencil; independent of the transversal.
CrossRatioValue pencil_cross_ratio(const HyperplaneCov& h1, const HyperplaneCov& h2,
                                   const HyperplaneCov& h3, const HyperplaneCov& h4,
                                   const Flat& transversal);

/// Numerical rank of the column set, relative tolerance kRankTolerance.
int numerical_rank(const Matrix& columns, double tol = kRankTolerance);

}  // namespace harmony
