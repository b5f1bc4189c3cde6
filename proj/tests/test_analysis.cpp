#include <gtest/gtest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "support.hpp"

using namespace harmony;
using namespace harmony::testing;

namespace {

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL() << "expected " << to_string(code);
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

ConvexBody unit_ball(int d) {
  Matrix q = Matrix::Identity(d + 1, d + 1);
  q(d, d) = -1;
  return ConvexBody::ellipsoid(q, Vector::Zero(d));
}

ConvexBody super4() { return ConvexBody::superellipsoid(vec({0, 0, 0}), vec({1, 1, 1}), 4); }

Vector json_vector(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

// Chordal distance of lambda:mu to -1:1, written out independently.
double chordal_to_minus_one(double lambda, double mu) {
  return std::abs(lambda + mu) / (std::hypot(lambda, mu) * std::sqrt(2.0));
}

// A random fixture-consistent ellipsoid scene in R^3: g is the pole of H.
struct RandomEllipsoid {
  ConvexBody body;
  HyperplaneCov polar;
  ProjPoint p1, p2;
};

RandomEllipsoid random_ellipsoid(std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  for (;;) {
    const Matrix m = random_collineation(rng, 3);
    const Matrix shape = m.transpose() * m / 3 + 0.5 * Matrix::Identity(3, 3);
    const Vector c = 0.5 * random_normal(rng, 3);
    const ConvexBody e = ConvexBody::ellipsoid_from_shape(c, shape);
    const Vector n = random_unit(rng, 3);
    const auto [lo, hi] = e.support_range(n);
    const HyperplaneCov polar = HyperplaneCov::from_chart(n, -(hi + 0.5 * (hi - lo)));
    const ProjPoint g = quadric_pole(e.as_ellipsoid()->quadric, polar);
    const Vector u = random_unit(rng, 3);
    const auto [t0, t1] = e.chord_params(g.chart(), u);
    const ProjPoint a = ProjPoint::from_chart(g.chart() + (t0 + 0.3 * (t1 - t0)) * u);
    const ProjPoint h = intersect(Flat::line(g, a), polar);
    const ProjPoint b = harmonic_conjugate(g, h, a);
    if (b.is_finite() && e.locate(b.chart()) == Location::Interior && distance(a, b) > 1e-3) return {e, polar, a, b};
  }
}

}  // namespace

TEST(Report, VerdictAndAggregates) {
  DeviationReport r("x", 1e-3);
  EXPECT_EQ(r.verdict(), Verdict::Degenerate);
  r.add("k", 1e-4, "b");
  r.add("k", 5e-4, "a");
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  EXPECT_DOUBLE_EQ(r.max_dev(), 5e-4);
  EXPECT_DOUBLE_EQ(r.mean_dev(), 3e-4);
  r.add("k", 2e-3, "c");
  EXPECT_EQ(r.verdict(), Verdict::Fail);
  EXPECT_EQ(r.worst_witness(), "c");
}

TEST(Report, MergeIsOrderIndependent) {
  DeviationReport a("x", 1.0), b("x", 1.0), c("x", 1.0);
  a.add("k", 0.5, "zeta");
  a.add("k", 0.1, "q");
  b.add("k", 0.5, "alpha");
  c.add("k", 0.2, "m");
  DeviationReport left("x", 1.0), right("x", 1.0);
  left.merge(a);
  left.merge(b);
  left.merge(c);
  right.merge(c);
  right.merge(b);
  right.merge(a);
  EXPECT_EQ(left.max_dev(), right.max_dev());
  EXPECT_EQ(left.n_samples(), right.n_samples());
  EXPECT_DOUBLE_EQ(left.mean_dev(), right.mean_dev());
  EXPECT_EQ(left.worst_witness(), "alpha");
  EXPECT_EQ(right.worst_witness(), "alpha");
}

TEST(ConstructG, UnitCircleFixture) {
  const auto [g, h] = construct_g(chart_point({0, 0}), chart_point({0.8, 0}), HyperplaneCov(vec({1, 0, -2})));
  EXPECT_LT(distance(h, chart_point({2, 0})), 1e-15);
  EXPECT_LT(distance(g, chart_point({0.5, 0})), 1e-15);
  EXPECT_LT(distance(g, quadric_pole(Matrix(vec({1, 1, -1}).asDiagonal()), HyperplaneCov(vec({1, 0, -2})))), 1e-15);
}

TEST(ConstructG, MidpointForPolarAtInfinity) {
  const auto [g, h] = construct_g(chart_point({-1, 0}), chart_point({1, 0}), HyperplaneCov::at_infinity(2));
  EXPECT_FALSE(h.is_finite());
  EXPECT_LT(distance(g, chart_point({0, 0})), 1e-15);
}

TEST(ConstructG, Errors) {
  expect_code(ErrorCode::PointOnPolar,
              [] { construct_g(chart_point({2, 0}), chart_point({0, 0}), HyperplaneCov(vec({1, 0, -2}))); });
  expect_code(ErrorCode::CoincidentPoints,
              [] { construct_g(chart_point({0, 0}), chart_point({0, 0}), HyperplaneCov(vec({1, 0, -2}))); });
}

TEST(ConstructG, SymmetricInThePair) {
  auto rng = make_stream(40, 0);
  for (int i = 0; i < 200; ++i) {
    const ProjPoint a(random_normal(rng, 4)), b(random_normal(rng, 4));
    const HyperplaneCov h(random_normal(rng, 4));
    const auto one = construct_g(a, b, h), two = construct_g(b, a, h);
    EXPECT_LT(distance(one.g, two.g), 1e-10);
    EXPECT_LT(distance(one.h, two.h), 1e-12);
    EXPECT_LT(cross_ratio(a, b, one.g, one.h).harmonic_deviation(), 1e-10);
  }
}

TEST(PoleCheck, CenterOfBallWithPolarAtInfinity) {
  const DeviationReport r = pole_check(unit_ball(3), chart_point({0, 0, 0}), HyperplaneCov::at_infinity(3), 500, 1);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  EXPECT_LT(r.max_dev(), 1e-12);
}

TEST(PoleCheck, CirclePolarity) {
  const DeviationReport r = pole_check(unit_ball(2), chart_point({0.5, 0}), HyperplaneCov(vec({1, 0, -2})), 2000, 1);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  EXPECT_EQ(r.n_samples(), 2000u);
}

TEST(PoleCheck, WrongPointFails) {
  // x-axis chord: [-1, 1; 1/4, 2] = -5/9.
  const double lambda = ((0.25 + 1) / (0.25 - 1)) / ((2.0 + 1) / (2.0 - 1));
  EXPECT_NEAR(lambda, -5.0 / 9.0, 1e-15);
  const auto v = cross_ratio(chart_point({-1, 0}), chart_point({1, 0}), chart_point({0.25, 0}), chart_point({2, 0}));
  EXPECT_NEAR(v.harmonic_deviation(), chordal_to_minus_one(-5.0 / 9.0, 1.0), 1e-14);
  EXPECT_NEAR(v.harmonic_deviation(), 4.0 / std::sqrt(212.0), 1e-14);

  const DeviationReport r = pole_check(unit_ball(2), chart_point({0.25, 0}), HyperplaneCov(vec({1, 0, -2})), 2000, 1);
  EXPECT_EQ(r.verdict(), Verdict::Fail);
  EXPECT_GT(r.max_dev(), 1e-2);
}

TEST(PoleCheck, WorstWitnessReproducesMax) {
  const HyperplaneCov polar(vec({1, 0, -2}));
  const DeviationReport r = pole_check(unit_ball(2), chart_point({0.25, 0.1}), polar, 300, 5);
  const auto w = nlohmann::json::parse(r.worst_witness());
  const auto a = ProjPoint::from_chart(json_vector(w["A"]));
  const auto b = ProjPoint::from_chart(json_vector(w["B"]));
  const auto p = ProjPoint::from_chart(json_vector(w["p"]));
  const ProjPoint q(json_vector(w["q"]));
  EXPECT_TRUE(polar.contains(q));
  EXPECT_NEAR(cross_ratio(a, b, p, q).harmonic_deviation(), r.max_dev(), 1e-12);
}

TEST(PoleCheck, Deterministic) {
  const auto r1 = pole_check(unit_ball(3), chart_point({0.1, 0, 0}), HyperplaneCov(vec({1, 0, 0, -2})), 100, 9);
  const auto r2 = pole_check(unit_ball(3), chart_point({0.1, 0, 0}), HyperplaneCov(vec({1, 0, 0, -2})), 100, 9);
  ASSERT_EQ(r1.n_samples(), r2.n_samples());
  for (std::size_t i = 0; i < r1.n_samples(); ++i) {
    EXPECT_EQ(r1.records()[i].deviation, r2.records()[i].deviation);
    EXPECT_EQ(r1.records()[i].witness, r2.records()[i].witness);
  }
}

TEST(PoleCheck, RequiresInteriorPoint) {
  expect_code(ErrorCode::PointNotInterior,
              [] { pole_check(unit_ball(2), chart_point({3, 0}), HyperplaneCov(vec({1, 0, -2})), 10, 1); });
}

TEST(PoleCheck, PolarityOnRandomEllipsoids) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const RandomEllipsoid fx = random_ellipsoid(100 + s);
    const ProjPoint g = quadric_pole(fx.body.as_ellipsoid()->quadric, fx.polar);
    EXPECT_LT(pole_check(fx.body, g, fx.polar, 500, s).max_dev(), 1e-9);
  }
}

TEST(PoleCheck, PoleHomologyPreservesBody) {
  const RandomEllipsoid fx = random_ellipsoid(7);
  const ProjPoint g = quadric_pole(fx.body.as_ellipsoid()->quadric, fx.polar);
  ASSERT_EQ(pole_check(fx.body, g, fx.polar, 500, 1).verdict(), Verdict::Pass);
  const HarmonicHomology phi(fx.polar, g);
  for (const auto& s : sample_boundary(fx.body, 200, 3)) {
    const ProjPoint y = phi.apply(ProjPoint::from_chart(s));
    ASSERT_TRUE(y.is_finite());
    EXPECT_LT(std::abs(fx.body.defining_function(y.chart())), 1e-9);
  }
}

TEST(FalsePole, BallCenterWithPolarAtInfinity) {
  FalsePoleOptions o;
  o.planes = 5;
  const FalsePoleReport r = false_pole_check(unit_ball(3), chart_point({0, 0, 0}), HyperplaneCov::at_infinity(3), o);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  EXPECT_LT(r.sections.max_dev(), 1e-10);
  EXPECT_TRUE(r.point_is_pole);
  for (const auto& pole : r.poles) EXPECT_LT(pole.pole.norm(), 1e-8);
}

TEST(FalsePole, EllipsoidPointIsFalsePole) {
  const SphereFixture fx;
  FalsePoleOptions o;
  o.planes = 8;
  const FalsePoleReport r = false_pole_check(fx.body, fx.p1, fx.polar, o);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  EXPECT_FALSE(r.point_is_pole);
  EXPECT_TRUE(r.is_false_pole());
}

TEST(FalsePole, SuperellipsoidFails) {
  FalsePoleOptions o;
  o.planes = 8;
  const FalsePoleReport r = false_pole_check(super4(), chart_point({0.3, 0, 0}), HyperplaneCov(vec({1, 0, 0, -2})), o);
  EXPECT_EQ(r.verdict(), Verdict::Fail);
  EXPECT_GT(r.sections.max_dev(), 1e-3);
}

TEST(FalsePole, NeedsThreeDimensions) {
  expect_code(ErrorCode::DegenerateInput,
              [] { false_pole_check(unit_ball(2), chart_point({0, 0}), HyperplaneCov(vec({1, 0, -2}))); });
}

TEST(EllipsoidWitness, SphereFixture) {
  const SphereFixture fx;
  const Flat l = polar_line(1.0);
  const WitnessHomology w = ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, l);
  EXPECT_LT(distance(w.phi.axis(), HyperplaneCov(vec({1, 0, -1.5, -0.5}))), 1e-14);
  EXPECT_LT(distance(w.phi.center(), chart_point({2, 0, -3})), 1e-14);
  EXPECT_LT(w.residual, 1e-12);
  EXPECT_TRUE(fx.polar.contains(w.phi.center()));
  for (const auto& s : l.span_points()) EXPECT_TRUE(w.phi.axis().contains(s));
  const SectionPair pair = sections_through(fx.body, fx.p1, fx.p2, l);
  EXPECT_LT(distance(w.phi.apply(pair.pi1), pair.pi2), 1e-14);
  // The witness is harmonic in the pencil through l.
  EXPECT_LT(pencil_cross_ratio(pair.pi1, pair.pi2, w.phi.axis(), fx.polar, Flat::line(fx.p1, fx.p2))
                .harmonic_deviation(),
            1e-12);
}

TEST(EllipsoidWitness, LineThroughHIsExcluded) {
  const SphereFixture fx;
  expect_code(ErrorCode::DegenerateAxis, [&] { ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, polar_line(0.0)); });
}

TEST(EllipsoidWitness, FixtureViolation) {
  const SphereFixture fx;
  expect_code(ErrorCode::FixtureViolation,
              [&] { ellipsoid_witness(fx.body, fx.polar, fx.p1, chart_point({0.7, 0, 0}), polar_line(1.0)); });
}

TEST(EllipsoidWitness, RandomEllipsoids) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const RandomEllipsoid fx = random_ellipsoid(200 + s);
    const auto [g, h] = construct_g(fx.p1, fx.p2, fx.polar);
    for (const auto& l : sample_flats_in(fx.polar, h, 10, s).flats) {
      const WitnessHomology w = ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, l);
      EXPECT_LT(w.residual, 1e-9);
      EXPECT_TRUE(fx.polar.contains(w.phi.center()));
    }
  }
}

TEST(WitnessSearch, MatchesClosedForm) {
  const RandomEllipsoid fx = random_ellipsoid(300);
  const auto [g, h] = construct_g(fx.p1, fx.p2, fx.polar);
  for (const auto& l : sample_flats_in(fx.polar, h, 2, 1).flats) {
    const WitnessHomology closed = ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, l);
    const WitnessHomology found = witness_search(fx.body, fx.polar, fx.p1, fx.p2, l);
    EXPECT_LT(found.residual, 1e-7);
    EXPECT_LT(distance(found.phi.axis(), closed.phi.axis()), 1e-6);
    EXPECT_LT(distance(found.phi.center(), closed.phi.center()), 1e-6);
  }
}

TEST(WitnessSearch, CoincidentSections) {
  const SphereFixture fx;
  const WitnessHomology w = witness_search(fx.body, fx.polar, fx.p1, fx.p2, polar_line(0.0));
  EXPECT_LT(w.residual, 1e-9);
}

TEST(WitnessSearch, SuperellipsoidHasNoWitness) {
  const ConvexBody s = super4();
  const HyperplaneCov polar(vec({1, 0, 0, -2}));
  const ProjPoint p1 = chart_point({0, 0, 0}), p2 = chart_point({0.3, 0, 0});
  WitnessSearchOptions o;
  o.starts = 4;
  const WitnessHomology w = witness_search(s, polar, p1, p2, polar_line(1.0), o);
  EXPECT_GT(w.residual, 1e-3);
}

TEST(LemmaPole, SphereFixture) {
  const SphereFixture fx;
  const auto [g, h] = construct_g(fx.p1, fx.p2, fx.polar);
  const FlatSample flats = sample_flats_in(fx.polar, h, 50, 3);
  std::vector<WitnessHomology> witnesses;
  for (const auto& l : flats.flats) witnesses.push_back(ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, l));
  const TraceReport r =
      lemma_pole_trace(fx.body, fx.polar, fx.p1, fx.p2, witnesses, chords_through(fx.body, g, 500, 3));
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  EXPECT_LT(r.find("g_prime")->max_dev(), 1e-9);
  EXPECT_LT(r.find("pencil")->max_dev(), 1e-9);
  EXPECT_LT(r.find("chords")->max_dev(), 1e-9);
  EXPECT_EQ(r.find("chords")->n_samples(), 500u);
}

TEST(LemmaPole, TamperedCenterFails) {
  const SphereFixture fx;
  const auto [g, h] = construct_g(fx.p1, fx.p2, fx.polar);
  const WitnessHomology w = ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, polar_line(1.0));
  const Vector moved = w.phi.center().unit() + 1e-3 * fx.polar.unit();
  const WitnessHomology tampered{w.l, HarmonicHomology(w.phi.axis(), ProjPoint(moved)), w.residual};
  const std::vector<WitnessHomology> list{tampered};
  const TraceReport r = lemma_pole_trace(fx.body, fx.polar, fx.p1, fx.p2, list, {});
  EXPECT_EQ(r.verdict(), Verdict::Fail);
  EXPECT_EQ(r.find("pencil")->verdict(), Verdict::Fail);
}

TEST(LemmaFalsePole, SphereFixture) {
  const SphereFixture fx;
  const Flat l = polar_line(1.0);
  const WitnessHomology w = ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, l);
  const auto [g, h] = construct_g(fx.p1, fx.p2, fx.polar);
  const ProjPoint q1 = intersect(Flat::line(g, w.phi.center()), join(l, fx.p1).as_hyperplane());
  EXPECT_LT(distance(q1, chart_point({0.4, 0, 0.2})), 1e-14);

  const TraceReport r = lemma_falsepole_trace(fx.body, fx.polar, fx.p1, fx.p2, w);
  EXPECT_EQ(r.verdict(), Verdict::Pass);
  for (const char* name : {"a", "b", "c", "e"}) {
    ASSERT_NE(r.find(name), nullptr);
    EXPECT_EQ(r.find(name)->n_samples(), 20u) << name;
    EXPECT_LT(r.find(name)->max_dev(), 1e-9) << name;
  }
  EXPECT_LT(r.find("d")->max_dev(), 1e-12);
}

TEST(LemmaFalsePole, TiltedAxisFailsAtA) {
  const SphereFixture fx;
  const WitnessHomology w = ellipsoid_witness(fx.body, fx.polar, fx.p1, fx.p2, polar_line(1.0));
  // Rotate the axis about l by 1e-3.
  const Flat l = w.l;
  const Vector a = l.dual().col(0), b = l.dual().col(1);
  const Vector axis = w.phi.axis().unit();
  const Vector other = (a.dot(axis) * b - b.dot(axis) * a).normalized();
  const WitnessHomology tilted{l, HarmonicHomology(HyperplaneCov(axis + 1e-3 * other), w.phi.center()), w.residual};
  const TraceReport r = lemma_falsepole_trace(fx.body, fx.polar, fx.p1, fx.p2, tilted);
  EXPECT_EQ(r.find("a")->verdict(), Verdict::Fail);
}

TEST(LemmaFalsePole, PolarCuttingTheBody) {
  // H: x = 1/2 cuts the sphere; g = (2, 0, 0) lies outside and serves as apex.
  const SphereFixture fx;
  const HyperplaneCov polar = HyperplaneCov::from_chart(vec({1, 0, 0}), -0.5);
  const auto [g, h] = construct_g(fx.p1, fx.p2, polar);
  EXPECT_LT(distance(g, chart_point({2, 0, 0})), 1e-14);
  int ran = 0;
  for (const auto& l : sample_flats_in(polar, h, 5, 11).flats) {
    const WitnessHomology w = ellipsoid_witness(fx.body, polar, fx.p1, fx.p2, l);
    const TraceReport r = lemma_falsepole_trace(fx.body, polar, fx.p1, fx.p2, w);
    if (r.verdict() == Verdict::Degenerate) continue;
    EXPECT_EQ(r.verdict(), Verdict::Pass);
    EXPECT_LT(r.max_dev(), 1e-8);
    ++ran;
  }
  EXPECT_GT(ran, 0);
}

TEST(Flats, SkipFractionSmall) {
  const SphereFixture fx;
  const auto [g, h] = construct_g(fx.p1, fx.p2, fx.polar);
  const FlatSample s = sample_flats_in(fx.polar, h, 1000, 4);
  EXPECT_LT(s.skipped, 10u);
  for (const auto& l : s.flats) {
    EXPECT_EQ(l.dim(), 1);
    for (const auto& p : l.span_points()) EXPECT_TRUE(fx.polar.contains(p));
  }
}

TEST(Theorem, SphereConfirmed) {
  const SphereFixture fx;
  TheoremOptions o;
  o.l_count = 30;
  const TheoremReport r = theorem_verify(fx.body, fx.polar, fx.p1, fx.p2, o);
  EXPECT_EQ(r.outcome, TheoremOutcome::EllipsoidConfirmed);
  ASSERT_TRUE(r.fit);
  EXPECT_LT(r.fit->residual, 1e-10);
  EXPECT_LT(quadric_distance(r.fit->quadric, fx.body.as_ellipsoid()->quadric), 1e-8);
}

TEST(Theorem, SuperellipsoidHypothesisFails) {
  TheoremOptions o;
  o.l_count = 2;
  const TheoremReport r = theorem_verify(super4(), HyperplaneCov(vec({1, 0, 0, -2})), chart_point({0, 0, 0}),
                                         chart_point({0.3, 0, 0}), o);
  EXPECT_EQ(r.outcome, TheoremOutcome::HypothesisFails);
  ASSERT_TRUE(r.failing_witness);
  EXPECT_GT(r.failing_witness->residual, 1e-3);
}

TEST(Theorem, DegenerateInputs) {
  const SphereFixture fx;
  expect_code(ErrorCode::DegenerateInput, [&] { theorem_verify(fx.body, fx.polar, fx.p1, fx.p1); });
  expect_code(ErrorCode::DegenerateInput,
              [&] { theorem_verify(fx.body, fx.polar, fx.p1, chart_point({3, 0, 0})); });
  expect_code(ErrorCode::DegenerateInput, [&] {
    theorem_verify(fx.body, HyperplaneCov::from_chart(vec({1, 0, 0}), -1.0), fx.p1, fx.p2);
  });
  expect_code(ErrorCode::DegenerateInput, [&] {
    theorem_verify(fx.body, HyperplaneCov::from_chart(vec({1, 0, 0}), -0.8), fx.p1, fx.p2);
  });
}
