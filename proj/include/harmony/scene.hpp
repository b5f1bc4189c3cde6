#pragma once

// JSON scene files: a body, a candidate polar hyperplane H and two interior
// points, plus run settings.
//
//   {
//     "dimension": 3,
//     "body": {"type": "ellipsoid", "quadric": [[...], ...], "interior": [...]},
//     "H": [1, 0, 0, -2],
//     "p1": [0, 0, 0],
//     "p2": [0.8, 0, 0],
//     "seed": 42, "samples": 2000, "planes": 20, "l_count": 200,
//     "tol_pole": 1e-8, "tol_section": 1e-6
//   }
//
// Other bodies: {"type": "polytope", "halfspaces": [[a..., b], ...]} (a.x + b <= 0)
// and {"type": "superellipsoid", "center": [...], "semiaxes": [...], "exponent": 4}.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "harmony/body.hpp"
#include "harmony/projective.hpp"

namespace harmony {

struct Scene {
  int dimension = 3;
  ConvexBody::Shape body;  // as read, after canonical scaling
  HyperplaneCov polar = HyperplaneCov::at_infinity(3);
  Vector p1;
  Vector p2;
  std::uint64_t seed = 42;
  std::size_t samples = 2000;
  std::size_t planes = 20;
  std::size_t l_count = 200;
  double tol_pole = 1e-8;
  double tol_section = 1e-6;

  ConvexBody make_body() const;
  ProjPoint point1() const { return ProjPoint::from_chart(p1); }
  ProjPoint point2() const { return ProjPoint::from_chart(p2); }

  friend bool operator==(const Scene& a, const Scene& b);
};

/// Throws ParseError for malformed input and ValidationError naming the
/// offending field when a precondition fails.
Scene scene_from_json(const nlohmann::json& doc);
Scene parse_scene_text(std::string_view text);
Scene parse_scene(const std::filesystem::path& path);

nlohmann::json scene_to_json(const Scene& scene);
/// Pretty JSON; numbers are written so that they read back bit-exactly.
std::string emit_scene(const Scene& scene);

enum class FixtureKind { SphereCanonical, EllipsoidRandom, Superellipsoid };

/// Throws ValidationError for an unknown name.
FixtureKind parse_fixture_kind(std::string_view name);
std::string_view to_string(FixtureKind kind);

/// Throws RetryExhausted when no admissible configuration is found in 100 draws.
Scene generate_fixture(FixtureKind kind, int dimension, std::uint64_t seed);

}  // namespace harmony
