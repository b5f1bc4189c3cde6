#include <cmath>

#include <Eigen/Dense>

#include "harmony/analysis.hpp"
#include "harmony/random.hpp"
#include "harmony/scene.hpp"

namespace harmony {

FixtureKind parse_fixture_kind(std::string_view name) {
  if (name == "sphere-canonical") return FixtureKind::SphereCanonical;
  if (name == "ellipsoid-random") return FixtureKind::EllipsoidRandom;
  if (name == "superellipsoid") return FixtureKind::Superellipsoid;
  throw GeometryError(ErrorCode::ValidationError, "kind: unknown fixture '" + std::string(name) + "'");
}

std::string_view to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::SphereCanonical:
      return "sphere-canonical";
    case FixtureKind::EllipsoidRandom:
      return "ellipsoid-random";
    case FixtureKind::Superellipsoid:
      return "superellipsoid";
  }
  return "unknown";
}

namespace {

Scene sphere(int d) {
  Matrix q = Matrix::Identity(d + 1, d + 1);
  q(d, d) = -1.0;
  Scene s;
  s.dimension = d;
  s.body = Ellipsoid{q, Vector::Zero(d)};
  s.polar = HyperplaneCov::from_chart(Vector::Unit(d, 0), -2.0);
  s.p1 = Vector::Zero(d);
  s.p2 = 0.8 * Vector::Unit(d, 0);
  return s;
}

// Places p1 on a line through g and p2 so that [p1, p2; g, h] = -1.
bool place_pair(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& g, Rng& rng, Vector& p1,
                Vector& p2) {
  if (!g.is_finite() || body.locate(g.chart()) != Location::Interior) return false;
  const Vector x = g.chart();
  const Vector u = random_unit(rng, body.dim());
  const Vector& n = polar.coords();
  if (std::abs(n.head(body.dim()).normalized().dot(u)) < 1e-3) return false;
  const auto [t0, t1] = body.chord_params(x, u);
  const double t = t0 + uniform(rng, 0.15, 0.85) * (t1 - t0);
  if (std::abs(t) < 0.05 * (t1 - t0)) return false;
  const ProjPoint a = ProjPoint::from_chart(x + t * u);
  const ProjPoint h = intersect(Flat::line(g, a), polar);
  const ProjPoint b = harmonic_conjugate(g, h, a);
  if (!b.is_finite(1e-6)) return false;
  p1 = a.chart();
  p2 = b.chart();
  return body.defining_function(p2) < -1e-3 && (p1 - p2).norm() > 1e-3;
}

bool passes_probes(const Scene& s) {
  const ConvexBody body = s.make_body();
  const ProjPoint p1 = s.point1(), p2 = s.point2();
  const auto [g, h] = construct_g(p1, p2, s.polar);
  const FlatSample probes = sample_flats_in(s.polar, h, 10, s.seed);
  for (const auto& l : probes.flats) {
    if (ellipsoid_witness(body, s.polar, p1, p2, l).residual >= 1e-7) return false;
  }
  return true;
}

}  // namespace

Scene generate_fixture(FixtureKind kind, int d, std::uint64_t seed) {
  if (d < 2) throw GeometryError(ErrorCode::ValidationError, "dimension: must be at least 2");
  if (kind == FixtureKind::SphereCanonical) return sphere(d);

  if (kind == FixtureKind::Superellipsoid) {
    Scene s;
    s.dimension = d;
    s.seed = seed;
    s.body = Superellipsoid{Vector::Zero(d), Vector::Ones(d), 4.0};
    s.polar = HyperplaneCov::from_chart(Vector::Unit(d, 0), -2.0);
    const ConvexBody body = s.make_body();
    // Place the pair as if the body were the quadric that best fits it.
    const QuadricFit fit = fit_quadric(sample_boundary(body, 400, seed));
    const ProjPoint g = quadric_pole(fit.quadric, s.polar);
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
      auto rng = make_stream(seed, attempt);
      try {
        if (place_pair(body, s.polar, g, rng, s.p1, s.p2)) return scene_from_json(scene_to_json(s));
      } catch (const GeometryError&) {
      }
    }
    throw GeometryError(ErrorCode::RetryExhausted, "no admissible superellipsoid configuration in 100 draws");
  }

  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    auto rng = make_stream(seed, attempt);
    const Matrix m = Eigen::Map<const Matrix>(random_normal(rng, d * d).data(), d, d);
    const Matrix shape = m.transpose() * m / d + 0.5 * Matrix::Identity(d, d);
    const Vector center = 0.5 * random_normal(rng, d);
    Matrix q(d + 1, d + 1);
    q.topLeftCorner(d, d) = shape;
    q.topRightCorner(d, 1) = -shape * center;
    q.bottomLeftCorner(1, d) = (-shape * center).transpose();
    q(d, d) = center.dot(shape * center) - 1.0;
    q /= q.cwiseAbs().maxCoeff();

    Scene s;
    s.dimension = d;
    s.seed = seed;
    s.body = Ellipsoid{q, center};
    const ConvexBody body = s.make_body();
    const Vector normal = random_unit(rng, d);
    const auto [lo, hi] = body.support_range(normal);
    const double offset = hi + uniform(rng, 0.1, 1.0) * (hi - lo);
    s.polar = HyperplaneCov::from_chart(normal, -offset);
    try {
      const ProjPoint g = quadric_pole(q, s.polar);
      if (!place_pair(body, s.polar, g, rng, s.p1, s.p2)) continue;
      if (!passes_probes(s)) continue;
      return scene_from_json(scene_to_json(s));
    } catch (const GeometryError&) {
      continue;
    }
  }
  throw GeometryError(ErrorCode::RetryExhausted, "no admissible ellipsoid configuration in 100 draws");
}

}  // namespace harmony
