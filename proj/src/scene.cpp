#include "harmony/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

namespace harmony {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw GeometryError(ErrorCode::ValidationError, msg); }
[[noreturn]] void malformed(const std::string& msg) { throw GeometryError(ErrorCode::ParseError, msg); }

const json& field(const json& obj, const std::string& name, const std::string& path) {
  const auto it = obj.find(name);
  if (it == obj.end()) malformed(path + name + ": missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) malformed(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(path + ": not finite");
  return v;
}

Vector vector_of(const json& j, const std::string& path, Eigen::Index size) {
  if (!j.is_array()) malformed(path + ": expected an array of numbers");
  if (static_cast<Eigen::Index>(j.size()) != size) {
    invalid(path + ": expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  }
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = number(j[static_cast<std::size_t>(i)], path);
  return v;
}

Matrix matrix_of(const json& j, const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array()) malformed(path + ": expected an array of rows");
  if (rows >= 0 && static_cast<Eigen::Index>(j.size()) != rows) {
    invalid(path + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  }
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    m.row(static_cast<Eigen::Index>(r)) = vector_of(j[r], path + "[" + std::to_string(r) + "]", cols).transpose();
  }
  return m;
}

std::size_t count_of(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) malformed(path + ": expected an integer");
  const auto v = j.get<long long>();
  if (v <= 0) invalid(path + ": must be positive");
  return static_cast<std::size_t>(v);
}

bool same(const Matrix& a, const Matrix& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

Vector ellipsoid_center(const Matrix& q) {
  const auto d = q.rows() - 1;
  return -q.topLeftCorner(d, d).ldlt().solve(Vector(q.topRightCorner(d, 1)));
}

ConvexBody::Shape read_body(const json& j, int d) {
  if (!j.is_object()) malformed("body: expected an object");
  const json& type = field(j, "type", "body.");
  if (!type.is_string()) malformed("body.type: expected a string");
  const auto name = type.get<std::string>();
  if (name == "ellipsoid") {
    Matrix q = matrix_of(field(j, "quadric", "body."), "body.quadric", d + 1, d + 1);
    const double m = q.cwiseAbs().maxCoeff();
    if (!(m > 0)) invalid("body.quadric: zero matrix");
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * m) invalid("body.quadric: must be symmetric");
    q /= m;
    Vector interior = j.contains("interior") ? vector_of(j["interior"], "body.interior", d) : ellipsoid_center(q);
    Vector xh(d + 1);
    xh << interior, 1.0;
    if (xh.dot(q * xh) > 0) q = -q;
    return Ellipsoid{q, interior};
  }
  if (name == "polytope") {
    Matrix rows = matrix_of(field(j, "halfspaces", "body."), "body.halfspaces", -1, d + 1);
    return HPolytope{rows};
  }
  if (name == "superellipsoid") {
    Superellipsoid s{vector_of(field(j, "center", "body."), "body.center", d),
                     vector_of(field(j, "semiaxes", "body."), "body.semiaxes", d),
                     number(field(j, "exponent", "body."), "body.exponent")};
    if (s.exponent < 2 || std::fmod(s.exponent, 2.0) != 0.0) invalid("body.exponent: must be an even integer >= 2");
    if (!(s.semiaxes.minCoeff() > 0)) invalid("body.semiaxes: must be positive");
    return s;
  }
  invalid("body.type: unknown body type '" + name + "'");
}

void validate(const Scene& s) {
  ConvexBody body = [&] {
    try {
      return s.make_body();
    } catch (const GeometryError& e) {
      invalid(std::string("body: ") + e.what());
    }
  }();
  const ProjPoint p1 = s.point1(), p2 = s.point2();
  if (same_point(p1, p2)) invalid("p1 equals p2");
  if (s.polar.contains(p1)) invalid("p1: lies on H");
  if (s.polar.contains(p2)) invalid("p2: lies on H");
  if (body.locate(s.p1) != Location::Interior) invalid("p1: not an interior point of the body");
  if (body.locate(s.p2) != Location::Interior) invalid("p2: not an interior point of the body");
  if (body.relation(s.polar) == HyperplaneRelation::Supports) invalid("H: supports the body");
  if (!(s.tol_pole > 0)) invalid("tol_pole: must be positive");
  if (!(s.tol_section > 0)) invalid("tol_section: must be positive");
}

}  // namespace

ConvexBody Scene::make_body() const {
  return std::visit(
      [](const auto& shape) -> ConvexBody {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return ConvexBody::ellipsoid(shape.quadric, shape.interior);
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return ConvexBody::polytope(shape.halfspaces);
        } else {
          return ConvexBody::superellipsoid(shape.center, shape.semiaxes, shape.exponent);
        }
      },
      body);
}

bool operator==(const Scene& a, const Scene& b) {
  if (a.dimension != b.dimension || a.body.index() != b.body.index()) return false;
  const bool bodies = std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.body);
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return same(x.quadric, y.quadric) && same(x.interior, y.interior);
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return same(x.halfspaces, y.halfspaces);
        } else {
          return same(x.center, y.center) && same(x.semiaxes, y.semiaxes) && x.exponent == y.exponent;
        }
      },
      a.body);
  return bodies && same(a.polar.coords(), b.polar.coords()) && same(a.p1, b.p1) && same(a.p2, b.p2) &&
         a.seed == b.seed && a.samples == b.samples && a.planes == b.planes && a.l_count == b.l_count &&
         a.tol_pole == b.tol_pole && a.tol_section == b.tol_section;
}

Scene scene_from_json(const json& doc) {
  if (!doc.is_object()) malformed("scene: expected a JSON object");
  Scene s;
  const json& dim = field(doc, "dimension", "");
  if (!dim.is_number_integer()) malformed("dimension: expected an integer");
  s.dimension = dim.get<int>();
  if (s.dimension < 2) invalid("dimension: must be at least 2");
  const int d = s.dimension;
  s.body = read_body(field(doc, "body", ""), d);
  const Vector h = vector_of(field(doc, "H", ""), "H", d + 1);
  if (!(h.cwiseAbs().maxCoeff() > kZeroTolerance)) invalid("H: zero covector");
  s.polar = HyperplaneCov(h);
  s.p1 = vector_of(field(doc, "p1", ""), "p1", d);
  s.p2 = vector_of(field(doc, "p2", ""), "p2", d);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned()) malformed("seed: expected an integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("samples")) s.samples = count_of(doc["samples"], "samples");
  if (doc.contains("planes")) s.planes = count_of(doc["planes"], "planes");
  if (doc.contains("l_count")) s.l_count = count_of(doc["l_count"], "l_count");
  if (doc.contains("tol_pole")) s.tol_pole = number(doc["tol_pole"], "tol_pole");
  if (doc.contains("tol_section")) s.tol_section = number(doc["tol_section"], "tol_section");
  validate(s);
  return s;
}

Scene parse_scene_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("malformed JSON: ") + e.what());
  }
  try {
    return scene_from_json(doc);
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

Scene parse_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene_text(buf.str());
}

json scene_to_json(const Scene& s) {
  json body = std::visit(
      [](const auto& shape) -> json {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Ellipsoid>) {
          return {{"type", "ellipsoid"}, {"quadric", to_json(shape.quadric)}, {"interior", to_json(shape.interior)}};
        } else if constexpr (std::is_same_v<T, HPolytope>) {
          return {{"type", "polytope"}, {"halfspaces", to_json(shape.halfspaces)}};
        } else {
          return {{"type", "superellipsoid"},
                  {"center", to_json(shape.center)},
                  {"semiaxes", to_json(shape.semiaxes)},
                  {"exponent", shape.exponent}};
        }
      },
      s.body);
  return {{"dimension", s.dimension}, {"body", body},           {"H", to_json(s.polar.coords())},
          {"p1", to_json(s.p1)},      {"p2", to_json(s.p2)},    {"seed", s.seed},
          {"samples", s.samples},     {"planes", s.planes},     {"l_count", s.l_count},
          {"tol_pole", s.tol_pole},   {"tol_section", s.tol_section}};
}

std::string emit_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

}  // namespace harmony
