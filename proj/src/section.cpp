#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "harmony/body.hpp"
#include "harmony/random.hpp"

namespace harmony {

SectionBody hypersection(const ConvexBody& body, const Flat& flat, const ProjPoint& seed) {
  const int d = body.dim();
  if (flat.ambient_dim() != d || seed.ambient_dim() != d) {
    throw GeometryError(ErrorCode::DegenerateInput, "flat, seed and body dimensions differ");
  }
  if (flat.dim() < 1) throw GeometryError(ErrorCode::DegenerateInput, "section flat must have dimension >= 1");
  if (!seed.is_finite()) throw GeometryError(ErrorCode::SeedNotInterior, "seed lies at infinity");
  if (!flat.contains(seed)) throw GeometryError(ErrorCode::SeedNotInterior, "seed is not on the flat");
  const Vector x = seed.chart();
  if (body.locate(x) != Location::Interior) {
    throw GeometryError(ErrorCode::SeedNotInterior, "seed is not an interior point of the body");
  }

  const int k = flat.dim();
  Matrix basis;
  if (k == d) {
    basis = Matrix::Identity(d, d);
  } else {
    const Matrix normals = flat.dual().topRows(d).transpose();
    Eigen::JacobiSVD<Matrix> svd(normals, Eigen::ComputeFullV);
    basis = svd.matrixV().rightCols(k);
  }
  return SectionBody(body, flat, x, basis);
}

double SectionBody::radius(const Vector& local_direction) const {
  const Vector dir = basis_ * local_direction.normalized();
  return body_.ray_exit(seed_, dir);
}

Vector SectionBody::boundary_point(const Vector& local_direction) const {
  const Vector u = local_direction.normalized();
  return seed_ + radius(u) * (basis_ * u);
}

double SectionBody::flat_distance(const Vector& chart) const {
  const Vector rel = chart - seed_;
  return (rel - basis_ * (basis_.transpose() * rel)).norm();
}

double SectionBody::boundary_distance(const Vector& chart) const {
  const Vector local = to_local(chart);
  const double r = local.norm();
  double radial;
  if (r < 1e-300) {
    radial = radius(Vector::Unit(dim(), 0));
  } else {
    radial = std::abs(r - radius(local / r));
  }
  return std::max(flat_distance(chart), radial);
}

double SectionBody::boundary_distance(const ProjPoint& p) const {
  if (!p.is_finite(1e-12)) return std::numeric_limits<double>::infinity();
  return boundary_distance(p.chart());
}

Location SectionBody::locate(const Vector& chart, double band) const {
  if (flat_distance(chart) > band) return Location::Exterior;
  return body_.locate(chart, band);
}

std::vector<Vector> SectionBody::sample_boundary(std::size_t n, std::uint64_t seed) const {
  std::vector<Vector> out;
  out.reserve(n);
  const int k = dim();
  for (std::size_t j = 0; j < n; ++j) {
    Vector u(k);
    if (k == 1) {
      u[0] = j % 2 == 0 ? 1.0 : -1.0;
    } else if (k == 2) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      u << std::cos(theta), std::sin(theta);
    } else {
      auto rng = make_stream(seed, j);
      u = random_unit(rng, k);
    }
    out.push_back(boundary_point(u));
  }
  return out;
}

Vector SectionBody::centroid(std::size_t n) const {
  Vector acc = Vector::Zero(seed_.size());
  const auto samples = sample_boundary(n);
  for (const auto& s : samples) acc += s;
  return acc / static_cast<double>(samples.size());
}

TangentLines tangent_lines_from_point(const SectionBody& section, const ProjPoint& apex) {
  if (section.dim() != 2) throw GeometryError(ErrorCode::DegenerateInput, "tangent lines need a planar section");
  if (!section.flat().contains(apex)) throw GeometryError(ErrorCode::NotInFlat, "apex is not in the section plane");
  const int d = section.body().dim();

  // Lines through the apex are ordered by a slope that is monotone in the
  // angle seen from the apex; the support lines are its extremes over the boundary.
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  Eigen::Vector2d forward, normal;
  const bool finite = apex.is_finite();
  if (finite) {
    const Vector a = apex.chart();
    switch (section.body().locate(a)) {
      case Location::Interior:
        throw GeometryError(ErrorCode::ApexInsideSection, "apex is inside the section");
      case Location::Boundary:
        throw GeometryError(ErrorCode::ApexOnBoundary, "apex is on the section boundary");
      case Location::Exterior:
        break;
    }
    origin = section.to_local(a);
    forward = -origin.normalized();
  } else {
    const Vector v = apex.coords().head(d);
    forward = (section.basis().transpose() * v).normalized();
  }
  normal << -forward[1], forward[0];

  const auto boundary_local = [&](double theta) -> Eigen::Vector2d {
    const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
    return section.radius(u) * u;
  };
  const auto slope = [&](double theta) {
    const Eigen::Vector2d w = boundary_local(theta) - origin;
    return finite ? normal.dot(w) / forward.dot(w) : normal.dot(w);
  };

  constexpr int kScan = 720;
  const double step = 2.0 * std::numbers::pi / kScan;
  int imin = 0, imax = 0;
  double smin = slope(0.0), smax = smin;
  for (int i = 1; i < kScan; ++i) {
    const double s = slope(i * step);
    if (s < smin) smin = s, imin = i;
    if (s > smax) smax = s, imax = i;
  }
  // Golden-section refinement of an extreme inside the bracketing scan cells.
  const auto refine = [&](int i, double sign) {
    double lo = (i - 1) * step, hi = (i + 1) * step;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = sign * slope(x1), f2 = sign * slope(x2);
    for (int it = 0; it < 80; ++it) {
      if (f1 > f2) {
        lo = x1;
        x1 = x2, f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = sign * slope(x2);
      } else {
        hi = x2;
        x2 = x1, f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = sign * slope(x1);
      }
    }
    return 0.5 * (lo + hi);
  };
  const Vector touch_min = section.from_local(boundary_local(refine(imin, 1.0)));
  const Vector touch_max = section.from_local(boundary_local(refine(imax, -1.0)));
  return {Flat::line(apex, ProjPoint::from_chart(touch_min)), Flat::line(apex, ProjPoint::from_chart(touch_max)),
          touch_min, touch_max};
}

}  // namespace harmony
