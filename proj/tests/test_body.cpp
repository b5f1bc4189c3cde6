#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace harmony;
using namespace harmony::testing;

namespace {

ConvexBody unit_ball(int d) {
  Matrix q = Matrix::Identity(d + 1, d + 1);
  q(d, d) = -1;
  return ConvexBody::ellipsoid(q, Vector::Zero(d));
}

ConvexBody square() {
  Matrix h(4, 3);
  h << 1, 0, -1, -1, 0, -1, 0, 1, -1, 0, -1, -1;
  return ConvexBody::polytope(h);
}

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL() << "expected " << to_string(code);
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Body, ContainsUnitBall) {
  const ConvexBody ball = unit_ball(3);
  EXPECT_EQ(contains(ball, vec({0, 0, 0})), Location::Interior);
  EXPECT_EQ(contains(ball, vec({1, 0, 0})), Location::Boundary);
  EXPECT_EQ(contains(ball, vec({2, 0, 0})), Location::Exterior);
}

TEST(Body, RejectsInvalidShapes) {
  Matrix hyperbola = Matrix(vec({1, -1, -1}).asDiagonal());
  expect_code(ErrorCode::InvalidBody, [&] { ConvexBody::ellipsoid(hyperbola, vec({0, 0.5})); });
  Matrix open(3, 3);
  open << 1, 0, -1, 0, 1, -1, 0, -1, 0;  // x <= 1, 0 <= y <= 1
  expect_code(ErrorCode::InvalidBody, [&] { ConvexBody::polytope(open); });
}

TEST(Chord, UnitCircleAxis) {
  const auto [a, b] = chord(unit_ball(2), Flat::line(chart_point({0, 0}), chart_point({1, 0})));
  EXPECT_TRUE(same_point(a, chart_point({-1, 0})));
  EXPECT_TRUE(same_point(b, chart_point({1, 0})));
}

TEST(Chord, TangentLine) {
  expect_code(ErrorCode::TangentLine,
              [] { chord(unit_ball(2), Flat::line(chart_point({0, 1}), chart_point({1, 1}))); });
}

TEST(Chord, MissingLine) {
  expect_code(ErrorCode::LineMissesBody,
              [] { chord(unit_ball(2), Flat::line(chart_point({0, 2}), chart_point({1, 2}))); });
}

TEST(Chord, SuperellipsoidDiagonal) {
  const ConvexBody s = ConvexBody::superellipsoid(vec({0, 0}), vec({1, 1}), 4);
  const auto [a, b] = chord(s, Flat::line(chart_point({0, 0}), chart_point({1, 1})));
  const double r = std::pow(2.0, -0.25);
  EXPECT_LT(distance(a, chart_point({-r, -r})), 1e-12);
  EXPECT_LT(distance(b, chart_point({r, r})), 1e-12);
}

TEST(Chord, EndpointsOnBoundaryAroundInteriorPoint) {
  auto rng = make_stream(30, 0);
  const std::vector<ConvexBody> bodies{unit_ball(3), ConvexBody::superellipsoid(vec({0.1, 0, 0}), vec({1, 2, 0.5}), 6),
                                       ConvexBody::ellipsoid_from_shape(vec({1, 0, 0}), Matrix(vec({1, 4, 9}).asDiagonal()))};
  for (const auto& body : bodies) {
    for (int i = 0; i < 200; ++i) {
      const Vector c = body.interior_point();
      const Vector u = random_unit(rng, 3);
      const Vector x = c + uniform(rng, 0.0, 0.9) * body.ray_exit(c, u) * u;
      const Vector w = random_unit(rng, 3);
      const auto [t0, t1] = body.chord_params(x, w);
      EXPECT_LT(t0, 0.0);
      EXPECT_GT(t1, 0.0);
      EXPECT_EQ(body.locate(x + t0 * w), Location::Boundary);
      EXPECT_EQ(body.locate(x + t1 * w), Location::Boundary);
    }
  }
}

TEST(Chord, PolytopeClipping) {
  const auto [a, b] = chord(square(), Flat::line(chart_point({0, 0.5}), chart_point({1, 0.5})));
  EXPECT_TRUE(same_point(a, chart_point({-1, 0.5})));
  EXPECT_TRUE(same_point(b, chart_point({1, 0.5})));
}

TEST(Hypersection, BallEquator) {
  const SectionBody s = hypersection(unit_ball(3), Flat::hyperplane(HyperplaneCov(vec({0, 0, 1, 0}))),
                                     chart_point({0, 0, 0}));
  EXPECT_EQ(s.dim(), 2);
  for (const auto& p : s.sample_boundary(50)) {
    EXPECT_NEAR(p.norm(), 1.0, 1e-12);
    EXPECT_NEAR(p[2], 0.0, 1e-15);
  }
}

TEST(Hypersection, EllipsoidCoordinatePlane) {
  const ConvexBody e = ConvexBody::ellipsoid_from_shape(vec({0, 0, 0}), Matrix(vec({1, 0.25, 1.0 / 9}).asDiagonal()));
  const SectionBody s = hypersection(e, Flat::hyperplane(HyperplaneCov(vec({0, 0, 1, 0}))), chart_point({0, 0, 0}));
  for (const auto& p : s.sample_boundary(64)) EXPECT_NEAR(p[0] * p[0] + p[1] * p[1] / 4, 1.0, 1e-12);
}

TEST(Hypersection, SamplesOnBoundaryAndFlat) {
  const SphereFixture fx;
  const Flat pi1 = join(polar_line(1.0), fx.p1);
  const SectionBody s = hypersection(fx.body, pi1, fx.p1);
  for (const auto& p : s.sample_boundary(200)) {
    EXPECT_EQ(fx.body.locate(p, 1e-10), Location::Boundary);
    EXPECT_TRUE(pi1.contains(ProjPoint::from_chart(p), 1e-10));
    EXPECT_LT(s.boundary_distance(p), 1e-12);
  }
}

TEST(Hypersection, SeedMustBeInterior) {
  expect_code(ErrorCode::SeedNotInterior, [] {
    hypersection(unit_ball(3), Flat::hyperplane(HyperplaneCov(vec({0, 0, 1, 0}))), chart_point({2, 0, 0}));
  });
}

TEST(TangentLines, CircleFromExternalPoint) {
  const SectionBody disk = hypersection(unit_ball(2), Flat::from_span(Matrix::Identity(3, 3)), chart_point({0, 0}));
  const TangentLines t = tangent_lines_from_point(disk, chart_point({2, 0}));
  const double h = std::sqrt(3.0) / 2;
  const bool order = t.touch_first[1] < 0;
  const ProjPoint up = chart_point({0.5, h}), down = chart_point({0.5, -h});
  const auto off_line = [](const Flat& line, const ProjPoint& p) {
    return std::abs(line.dual().col(0).normalized().dot(p.unit()));
  };
  EXPECT_LT(off_line(t.first, order ? down : up), 1e-12);
  EXPECT_LT(off_line(t.second, order ? up : down), 1e-12);
  // The touch point sits at a flat extremum, so it is only located to about sqrt(eps).
  EXPECT_LT((t.touch_first - vec({0.5, order ? -h : h})).norm(), 1e-7);
  EXPECT_LT((t.touch_second - vec({0.5, order ? h : -h})).norm(), 1e-7);
}

TEST(TangentLines, ApexInside) {
  const SectionBody disk = hypersection(unit_ball(2), Flat::from_span(Matrix::Identity(3, 3)), chart_point({0, 0}));
  expect_code(ErrorCode::ApexInsideSection, [&] { tangent_lines_from_point(disk, chart_point({0, 0})); });
}

TEST(TangentLines, SquareCorners) {
  const ConvexBody sq = square();
  const SectionBody s = hypersection(sq, Flat::from_span(Matrix::Identity(3, 3)), chart_point({0, 0}));
  const TangentLines t = tangent_lines_from_point(s, chart_point({3, 0}));
  for (const auto& line : {t.first, t.second}) {
    EXPECT_TRUE(line.contains(chart_point({1, 1}), 1e-8) || line.contains(chart_point({1, -1}), 1e-8));
  }
}

TEST(TangentLines, TouchOnlyInBand) {
  const SectionBody disk = hypersection(unit_ball(2), Flat::from_span(Matrix::Identity(3, 3)), chart_point({0, 0}));
  const ProjPoint apex = chart_point({2, 0.5});
  const TangentLines t = tangent_lines_from_point(disk, apex);
  for (const auto& touch : {t.touch_first, t.touch_second}) {
    const Vector dir = (touch - vec({2, 0.5})).normalized();
    for (double delta : {1e-6, -1e-6}) {
      const Vector rotated = Eigen::Rotation2D<double>(delta).toRotationMatrix() * dir;
      // One rotation sense meets the disk, the other misses it.
      bool hits = true;
      try {
        unit_ball(2).chord_params(vec({2, 0.5}), rotated);
      } catch (const GeometryError&) {
        hits = false;
      }
      const double signed_gap = std::abs(vec({2, 0.5}).dot(Vector(Eigen::Vector2d(-rotated[1], rotated[0]))));
      EXPECT_EQ(hits, signed_gap < 1.0);
    }
  }
}

TEST(Polarity, CirclePoleOfLine) {
  const Matrix q = Matrix(vec({1, 1, -1}).asDiagonal());
  EXPECT_TRUE(same_point(quadric_pole(q, HyperplaneCov(vec({1, 0, -2}))), chart_point({0.5, 0})));
  EXPECT_TRUE(same_hyperplane(quadric_polar(q, chart_point({0, 0})), HyperplaneCov::at_infinity(2)));
}

TEST(Polarity, ChordDivision) {
  // gA : gB = -(qA : qB) on the x-axis chord with g = 1/2, q = 2.
  const double ga = 0.5 - (-1.0), gb = 0.5 - 1.0, qa = 2.0 - (-1.0), qb = 2.0 - 1.0;
  EXPECT_DOUBLE_EQ(ga / gb, -(qa / qb));
  const auto v = cross_ratio(chart_point({-1, 0}), chart_point({1, 0}), chart_point({0.5, 0}), chart_point({2, 0}));
  EXPECT_LT(v.harmonic_deviation(), 1e-15);
}

TEST(Polarity, Involution) {
  auto rng = make_stream(31, 0);
  for (int i = 0; i < 1000; ++i) {
    const Matrix m = random_collineation(rng, 4);
    const Matrix q = m.transpose() * Matrix(vec({1, 1, 1, -1}).asDiagonal()) * m;
    const ProjPoint p(random_normal(rng, 4));
    EXPECT_LT(distance(quadric_pole(q, quadric_polar(q, p)), p), 1e-10);
  }
}

TEST(Polarity, SingularQuadric) {
  expect_code(ErrorCode::SingularQuadric,
              [] { quadric_pole(Matrix(vec({1, 0, -1}).asDiagonal()), HyperplaneCov(vec({1, 0, 0}))); });
}

TEST(Fit, ExactCircle) {
  std::vector<Vector> samples;
  for (int i = 0; i < 100; ++i) {
    const double t = 2 * std::numbers::pi * i / 100;
    samples.push_back(vec({std::cos(t), std::sin(t)}));
  }
  const QuadricFit fit = fit_quadric(samples);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_LT(quadric_distance(fit.quadric, Matrix(vec({1, 1, -1}).asDiagonal())), 1e-10);
  EXPECT_TRUE(fit.ellipsoid_compatible());
}

TEST(Fit, RandomEllipsoid) {
  auto rng = make_stream(32, 0);
  for (int k = 0; k < 5; ++k) {
    const Matrix m = random_collineation(rng, 3);
    const Matrix shape = m.transpose() * m + 0.2 * Matrix::Identity(3, 3);
    const Vector c = random_normal(rng, 3);
    const ConvexBody e = ConvexBody::ellipsoid_from_shape(c, shape);
    const QuadricFit fit = fit_quadric(sample_boundary(e, 500, k));
    EXPECT_LT(fit.residual, 1e-10);
    EXPECT_LT(quadric_distance(fit.quadric, e.as_ellipsoid()->quadric), 1e-8);
  }
}

TEST(Fit, SuperellipsoidIsNotAQuadric) {
  const ConvexBody s = ConvexBody::superellipsoid(vec({0, 0, 0}), vec({1, 1, 1}), 4);
  const QuadricFit fit = fit_quadric(sample_boundary(s, 500, 1));
  EXPECT_GT(fit.residual, 1e-3);
  EXPECT_FALSE(fit.ellipsoid_compatible());
}

TEST(Fit, AffineEquivariance) {
  auto rng = make_stream(33, 0);
  const ConvexBody e = ConvexBody::ellipsoid_from_shape(vec({0.2, -0.1, 0.4}), Matrix(vec({1, 2, 3}).asDiagonal()));
  const auto samples = sample_boundary(e, 300, 2);
  const QuadricFit base = fit_quadric(samples);
  for (int k = 0; k < 10; ++k) {
    const Matrix a = random_collineation(rng, 3);
    const Vector b = random_normal(rng, 3);
    std::vector<Vector> moved;
    for (const auto& s : samples) moved.push_back(a * s + b);
    Matrix t = Matrix::Identity(4, 4);
    t.topLeftCorner(3, 3) = a;
    t.topRightCorner(3, 1) = b;
    const Matrix tinv = t.inverse();
    const Matrix expected = tinv.transpose() * base.quadric * tinv;
    EXPECT_LT(quadric_distance(fit_quadric(moved).quadric, expected), 1e-6);
  }
}

TEST(Fit, TooFewSamples) {
  expect_code(ErrorCode::InsufficientSamples, [] {
    const std::vector<Vector> few{vec({1, 0}), vec({0, 1}), vec({-1, 0})};
    fit_quadric(few);
  });
}

TEST(Fit, DegenerateSamples) {
  expect_code(ErrorCode::DegenerateSampleSet, [] {
    std::vector<Vector> line;
    for (int i = 0; i < 20; ++i) line.push_back(vec({double(i), 2.0 * i}));
    fit_quadric(line);
  });
}
