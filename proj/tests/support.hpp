#pragma once

// Shared generators and independent reference computations for the tests.

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "harmony/analysis.hpp"
#include "harmony/random.hpp"

namespace harmony::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline ProjPoint chart_point(std::initializer_list<double> values) { return ProjPoint::from_chart(vec(values)); }

/// Well-conditioned random invertible matrix.
inline Matrix random_collineation(Rng& rng, int n) {
  for (;;) {
    const Matrix m = Eigen::Map<const Matrix>(random_normal(rng, n * n).data(), n, n);
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv[n - 1] > 0.05 * sv[0]) return m;
  }
}

/// Nonzero scalar in [-10, 10] away from 0.
inline double random_scale(Rng& rng) {
  const double s = uniform(rng, 0.1, 10.0);
  return uniform(rng, 0.0, 1.0) < 0.5 ? -s : s;
}

/// Plain affine-parameter cross ratio ((c-a)/(c-b)) / ((d-a)/(d-b)).
inline double affine_cross_ratio(double a, double b, double c, double d) {
  return ((c - a) / (c - b)) / ((d - a) / (d - b));
}

/// Unit sphere in R^3 with H: x = 2, p1 = origin, p2 = (4/5, 0, 0).
struct SphereFixture {
  ConvexBody body = ConvexBody::ellipsoid(Matrix(vec({1, 1, 1, -1}).asDiagonal()), Vector::Zero(3));
  HyperplaneCov polar = HyperplaneCov::from_chart(vec({1, 0, 0}), -2.0);
  ProjPoint p1 = chart_point({0, 0, 0});
  ProjPoint p2 = chart_point({0.8, 0, 0});
};

/// The line {x = 2, z = offset} of the sphere fixture's polar plane.
inline Flat polar_line(double offset) {
  Matrix dual(4, 2);
  dual.col(0) = vec({1, 0, 0, -2});
  dual.col(1) = vec({0, 0, 1, -offset});
  return Flat::from_dual(dual);
}

}  // namespace harmony::testing
