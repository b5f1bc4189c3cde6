#include "harmony/body.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "harmony/random.hpp"

namespace harmony {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double abs_pow(double s, double m) {
  const double a = std::abs(s);
  if (m == std::floor(m) && m <= 16) {
    double r = 1.0;
    for (int i = 0; i < static_cast<int>(m); ++i) r *= a;
    return r;
  }
  return std::pow(a, m);
}

Vector homogeneous(const Vector& x, double w) {
  Vector h(x.size() + 1);
  h << x, w;
  return h;
}

// Calls visit(indices) for every k-subset of {0, ..., n-1}.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      visit(idx);
      return;
    }
    for (int i = start; i <= n - (k - depth); ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

// Bisection for a sign change of f on [lo, hi], f(lo) and f(hi) of opposite sign.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

struct SuperellipsoidLine {
  const Superellipsoid& s;
  const Vector& base;
  const Vector& dir;

  double value(double t) const {
    double acc = -1.0;
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      acc += abs_pow((base[i] + t * dir[i] - s.center[i]) / s.semiaxes[i], s.exponent);
    }
    return acc;
  }

  double slope(double t) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < base.size(); ++i) {
      const double u = (base[i] + t * dir[i] - s.center[i]) / s.semiaxes[i];
      const double mag = s.exponent * abs_pow(u, s.exponent - 1.0);
      acc += (u < 0 ? -mag : mag) * dir[i] / s.semiaxes[i];
    }
    return acc;
  }
};

}  // namespace

ConvexBody ConvexBody::ellipsoid(const Matrix& quadric, const Vector& interior) {
  const Eigen::Index d = interior.size();
  if (d < 1 || quadric.rows() != d + 1 || quadric.cols() != d + 1) {
    throw GeometryError(ErrorCode::InvalidBody, "quadric must be (d+1)x(d+1) for a d-dimensional interior point");
  }
  if (!quadric.allFinite() || !interior.allFinite()) {
    throw GeometryError(ErrorCode::InvalidBody, "non-finite ellipsoid data");
  }
  Matrix q = 0.5 * (quadric + quadric.transpose());
  const Vector xh = homogeneous(interior, 1.0);
  const double at_interior = xh.dot(q * xh);
  if (std::abs(at_interior) <= 1e-14 * q.cwiseAbs().maxCoeff()) {
    throw GeometryError(ErrorCode::InvalidBody, "interior point lies on the quadric");
  }
  if (at_interior > 0) q = -q;
  q /= q.cwiseAbs().maxCoeff();

  const Matrix a = q.topLeftCorner(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const auto& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * ev.cwiseAbs().maxCoeff())) {
    throw GeometryError(ErrorCode::InvalidBody, "quadric does not bound an ellipsoid");
  }
  const Vector b = q.topRightCorner(d, 1);
  const double at_center = q(d, d) - b.dot(a.ldlt().solve(b));

  ConvexBody body(Ellipsoid{q, interior}, interior);
  body.quadric_scale_ = std::abs(at_center);
  return body;
}

ConvexBody ConvexBody::ellipsoid_from_shape(const Vector& center, const Matrix& shape) {
  const Eigen::Index d = center.size();
  if (shape.rows() != d || shape.cols() != d) {
    throw GeometryError(ErrorCode::InvalidBody, "shape matrix must be d x d");
  }
  Matrix q(d + 1, d + 1);
  const Vector ac = shape * center;
  q.topLeftCorner(d, d) = shape;
  q.topRightCorner(d, 1) = -ac;
  q.bottomLeftCorner(1, d) = -ac.transpose();
  q(d, d) = center.dot(ac) - 1.0;
  return ellipsoid(q, center);
}

ConvexBody ConvexBody::polytope(const Matrix& halfspaces) {
  const int d = static_cast<int>(halfspaces.cols()) - 1;
  const int n = static_cast<int>(halfspaces.rows());
  if (d < 2 || n < d + 1) throw GeometryError(ErrorCode::InvalidBody, "polytope needs at least d+1 facets, d >= 2");
  if (!halfspaces.allFinite()) throw GeometryError(ErrorCode::InvalidBody, "non-finite facet data");

  Matrix unit = halfspaces;
  for (int i = 0; i < n; ++i) {
    const double len = unit.row(i).head(d).norm();
    if (!(len > kZeroTolerance)) throw GeometryError(ErrorCode::InvalidBody, "facet with zero normal");
    unit.row(i) /= len;
  }
  const Matrix normals = unit.leftCols(d);
  const Vector offsets = unit.col(d);

  if (numerical_rank(normals.transpose()) < d) {
    throw GeometryError(ErrorCode::InvalidBody, "polytope is unbounded");
  }
  // A nonzero recession cone has an extreme ray on d-1 active facets.
  bool unbounded = false;
  for_each_subset(n, d - 1, [&](const std::vector<int>& idx) {
    if (unbounded) return;
    Matrix sub(d - 1, d);
    for (int r = 0; r < d - 1; ++r) sub.row(r) = normals.row(idx[r]);
    Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
    const Vector ray = svd.matrixV().col(d - 1);
    for (double sign : {1.0, -1.0}) {
      if ((normals * (sign * ray)).maxCoeff() <= 1e-12) unbounded = true;
    }
  });
  if (unbounded) throw GeometryError(ErrorCode::InvalidBody, "polytope is unbounded");

  std::vector<Vector> vertices;
  for_each_subset(n, d, [&](const std::vector<int>& idx) {
    Matrix sub(d, d);
    Vector rhs(d);
    for (int r = 0; r < d; ++r) {
      sub.row(r) = normals.row(idx[r]);
      rhs[r] = -offsets[idx[r]];
    }
    Eigen::FullPivLU<Matrix> lu(sub);
    if (!lu.isInvertible()) return;
    const Vector v = lu.solve(rhs);
    if ((normals * v + offsets).maxCoeff() > 1e-9) return;
    for (const auto& w : vertices) {
      if ((w - v).norm() < 1e-9) return;
    }
    vertices.push_back(v);
  });
  if (vertices.size() < static_cast<std::size_t>(d + 1)) {
    throw GeometryError(ErrorCode::InvalidBody, "polytope is empty or flat");
  }
  Matrix vert(d, static_cast<Eigen::Index>(vertices.size()));
  Vector centroid = Vector::Zero(d);
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    vert.col(static_cast<Eigen::Index>(j)) = vertices[j];
    centroid += vertices[j];
  }
  centroid /= static_cast<double>(vertices.size());
  if ((normals * centroid + offsets).maxCoeff() > -1e-9) {
    throw GeometryError(ErrorCode::InvalidBody, "polytope has empty interior");
  }
  ConvexBody body(HPolytope{halfspaces}, centroid);
  body.unit_halfspaces_ = unit;
  body.vertices_ = vert;
  return body;
}

ConvexBody ConvexBody::superellipsoid(const Vector& center, const Vector& semiaxes, double exponent) {
  if (center.size() < 1 || semiaxes.size() != center.size()) {
    throw GeometryError(ErrorCode::InvalidBody, "center and semiaxes must have the same dimension");
  }
  if (!center.allFinite() || !(semiaxes.minCoeff() > 0.0) || !std::isfinite(semiaxes.maxCoeff())) {
    throw GeometryError(ErrorCode::InvalidBody, "semiaxes must be positive");
  }
  if (!(exponent >= 2.0) || !std::isfinite(exponent)) {
    throw GeometryError(ErrorCode::InvalidBody, "superellipsoid exponent must be >= 2");
  }
  return ConvexBody(Superellipsoid{center, semiaxes, exponent}, center);
}

double ConvexBody::defining_function(const Vector& x) const {
  if (const auto* e = std::get_if<Ellipsoid>(&shape_)) {
    const Vector xh = homogeneous(x, 1.0);
    return xh.dot(e->quadric * xh) / quadric_scale_;
  }
  if (std::holds_alternative<HPolytope>(shape_)) {
    const auto d = x.size();
    return (unit_halfspaces_.leftCols(d) * x + unit_halfspaces_.col(d)).maxCoeff();
  }
  const auto& s = std::get<Superellipsoid>(shape_);
  double acc = -1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += abs_pow((x[i] - s.center[i]) / s.semiaxes[i], s.exponent);
  return acc;
}

Location ConvexBody::locate(const Vector& x, double band) const {
  const double f = defining_function(x);
  if (f < -band) return Location::Interior;
  if (f > band) return Location::Exterior;
  return Location::Boundary;
}

std::pair<double, double> ConvexBody::chord_params(const Vector& base, const Vector& direction) const {
  const Vector dir = direction.normalized();
  constexpr double half_tangent = 0.5 * kTangentLength;

  if (const auto* e = std::get_if<Ellipsoid>(&shape_)) {
    const Vector bh = homogeneous(base, 1.0);
    const Vector dh = homogeneous(dir, 0.0);
    const Vector qb = e->quadric * bh;
    const double a = dh.dot(e->quadric * dh);
    const double b = dh.dot(qb);
    const double c = bh.dot(qb);
    const double disc = b * b - a * c;
    const double half_sq = disc / (a * a);
    if (half_sq < -half_tangent * half_tangent) throw GeometryError(ErrorCode::LineMissesBody, "line misses the ellipsoid");
    if (half_sq <= half_tangent * half_tangent) throw GeometryError(ErrorCode::TangentLine, "line is tangent to the ellipsoid");
    const double root = std::sqrt(disc);
    const double q = -(b + std::copysign(root, b));
    double t0 = q / a;
    double t1 = q != 0.0 ? c / q : -t0;
    if (t0 > t1) std::swap(t0, t1);
    return {t0, t1};
  }

  if (std::holds_alternative<HPolytope>(shape_)) {
    const auto d = base.size();
    double lo = -kInf, hi = kInf;
    for (Eigen::Index i = 0; i < unit_halfspaces_.rows(); ++i) {
      const double s = unit_halfspaces_.row(i).head(d).dot(dir);
      const double v = unit_halfspaces_.row(i).head(d).dot(base) + unit_halfspaces_(i, d);
      if (std::abs(s) < 1e-15) {
        if (v > 0) throw GeometryError(ErrorCode::LineMissesBody, "line misses the polytope");
        continue;
      }
      if (s > 0) {
        hi = std::min(hi, -v / s);
      } else {
        lo = std::max(lo, -v / s);
      }
    }
    if (hi - lo < -kTangentLength) throw GeometryError(ErrorCode::LineMissesBody, "line misses the polytope");
    if (hi - lo <= kTangentLength) throw GeometryError(ErrorCode::TangentLine, "line touches the polytope");
    return {lo, hi};
  }

  const auto& s = std::get<Superellipsoid>(shape_);
  const SuperellipsoidLine line{s, base, dir};
  const double tc = dir.dot(s.center - base);
  const double reach = s.semiaxes.norm() + 1.0;
  const double lo = tc - reach, hi = tc + reach;
  // The restriction is convex; its minimizer is where the slope changes sign.
  double tmin;
  if (line.slope(lo) >= 0) {
    tmin = lo;
  } else if (line.slope(hi) <= 0) {
    tmin = hi;
  } else {
    tmin = bisect([&](double t) { return line.slope(t); }, lo, hi);
  }
  const double gmin = line.value(tmin);
  if (gmin >= 0) {
    if (gmin < 1e-12) throw GeometryError(ErrorCode::TangentLine, "line is tangent to the superellipsoid");
    throw GeometryError(ErrorCode::LineMissesBody, "line misses the superellipsoid");
  }
  const auto g = [&](double t) { return line.value(t); };
  const double t0 = bisect(g, lo, tmin);
  const double t1 = bisect(g, tmin, hi);
  if (t1 - t0 <= kTangentLength) throw GeometryError(ErrorCode::TangentLine, "line is tangent to the superellipsoid");
  return {t0, t1};
}

double ConvexBody::ray_exit(const Vector& origin, const Vector& direction) const {
  const Vector dir = direction.normalized();
  if (const auto* e = std::get_if<Ellipsoid>(&shape_)) {
    const Vector bh = homogeneous(origin, 1.0);
    const Vector dh = homogeneous(dir, 0.0);
    const Vector qb = e->quadric * bh;
    const double a = dh.dot(e->quadric * dh);
    const double b = dh.dot(qb);
    const double c = bh.dot(qb);
    if (!(c < 0)) throw GeometryError(ErrorCode::SeedNotInterior, "ray origin is not interior");
    const double root = std::sqrt(b * b - a * c);
    return b > 0 ? c / (-b - root) : (-b + root) / a;
  }
  if (std::holds_alternative<HPolytope>(shape_)) {
    const auto d = origin.size();
    double t = kInf;
    for (Eigen::Index i = 0; i < unit_halfspaces_.rows(); ++i) {
      const double s = unit_halfspaces_.row(i).head(d).dot(dir);
      const double v = unit_halfspaces_.row(i).head(d).dot(origin) + unit_halfspaces_(i, d);
      if (v >= 0) throw GeometryError(ErrorCode::SeedNotInterior, "ray origin is not interior");
      if (s > 0) t = std::min(t, -v / s);
    }
    return t;
  }
  const auto& s = std::get<Superellipsoid>(shape_);
  const SuperellipsoidLine line{s, origin, dir};
  if (!(line.value(0.0) < 0)) throw GeometryError(ErrorCode::SeedNotInterior, "ray origin is not interior");
  const double hi = (origin - s.center).norm() + s.semiaxes.norm() + 1.0;
  return bisect([&](double t) { return line.value(t); }, 0.0, hi);
}

std::pair<double, double> ConvexBody::support_range(const Vector& normal) const {
  if (const auto* e = std::get_if<Ellipsoid>(&shape_)) {
    const auto d = normal.size();
    const Matrix a = e->quadric.topLeftCorner(d, d);
    const Vector b = e->quadric.topRightCorner(d, 1);
    const auto ldlt = a.ldlt();
    const Vector center = -ldlt.solve(b);
    const double rho = -(e->quadric(d, d) - b.dot(ldlt.solve(b)));
    const double half = std::sqrt(rho * normal.dot(ldlt.solve(normal)));
    const double mid = normal.dot(center);
    return {mid - half, mid + half};
  }
  if (std::holds_alternative<HPolytope>(shape_)) {
    const Vector values = vertices_.transpose() * normal;
    return {values.minCoeff(), values.maxCoeff()};
  }
  const auto& s = std::get<Superellipsoid>(shape_);
  const double dual = s.exponent / (s.exponent - 1.0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < normal.size(); ++i) acc += std::pow(std::abs(normal[i] * s.semiaxes[i]), dual);
  const double half = std::pow(acc, 1.0 / dual);
  const double mid = normal.dot(s.center);
  return {mid - half, mid + half};
}

HyperplaneRelation ConvexBody::relation(const HyperplaneCov& h) const {
  const auto d = dim();
  const Vector normal = h.coords().head(d);
  const double len = normal.norm();
  if (len <= 1e-14) return HyperplaneRelation::Disjoint;
  const auto [lo, hi] = support_range(normal / len);
  const double target = -h.coords()[d] / len;
  const double tol = 1e-9 * (1.0 + std::abs(hi - lo));
  if (std::abs(target - lo) <= tol || std::abs(target - hi) <= tol) return HyperplaneRelation::Supports;
  if (target < lo || target > hi) return HyperplaneRelation::Disjoint;
  return HyperplaneRelation::Cuts;
}

ChartLine chart_line(const Flat& line) {
  if (line.dim() != 1) throw GeometryError(ErrorCode::DegenerateInput, "expected a line");
  const auto d = line.ambient_dim();
  const Matrix& span = line.span();
  const double w0 = span(d, 0), w1 = span(d, 1);
  if (std::hypot(w0, w1) < 1e-14) throw GeometryError(ErrorCode::AtInfinity, "line lies at infinity");
  const Vector finite = w0 * span.col(0) + w1 * span.col(1);
  const Vector ideal = w1 * span.col(0) - w0 * span.col(1);
  Vector direction = ideal.head(d).normalized();
  // Orient like a canonical point so chord endpoints come out in a fixed order.
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(direction[i]) > 1e-12) {
      if (direction[i] < 0) direction = -direction;
      break;
    }
  }
  return {finite.head(d) / finite[d], direction};
}

std::pair<ProjPoint, ProjPoint> chord(const ConvexBody& body, const Flat& line) {
  ChartLine cl;
  try {
    cl = chart_line(line);
  } catch (const GeometryError& e) {
    if (e.code() == ErrorCode::AtInfinity) throw GeometryError(ErrorCode::LineMissesBody, "line lies at infinity");
    throw;
  }
  const auto [t0, t1] = body.chord_params(cl.base, cl.direction);
  return {ProjPoint::from_chart(cl.base + t0 * cl.direction), ProjPoint::from_chart(cl.base + t1 * cl.direction)};
}

std::vector<Vector> sample_boundary(const ConvexBody& body, std::size_t n, std::uint64_t seed) {
  std::vector<Vector> out;
  out.reserve(n);
  const Vector& origin = body.interior_point();
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = make_stream(seed, i);
    const Vector u = random_unit(rng, body.dim());
    out.push_back(origin + body.ray_exit(origin, u) * u);
  }
  return out;
}

}  // namespace harmony
