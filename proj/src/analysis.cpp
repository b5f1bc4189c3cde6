#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "harmony/analysis.hpp"
#include "harmony/optimize.hpp"
#include "harmony/random.hpp"

namespace harmony {

HarmonicPair construct_g(const ProjPoint& p1, const ProjPoint& p2, const HyperplaneCov& polar) {
  if (same_point(p1, p2)) throw GeometryError(ErrorCode::CoincidentPoints, "p1 equals p2");
  if (polar.contains(p1) || polar.contains(p2)) {
    throw GeometryError(ErrorCode::PointOnPolar, "p1 or p2 lies on H");
  }
  const ProjPoint h = intersect(Flat::line(p1, p2), polar);
  return {harmonic_conjugate(p1, p2, h), h};
}

namespace {

// [A, B; x, q] on the line x + t w, with q where the line meets the polar.
double chord_deviation(const ConvexBody& body, const Vector& x, const Vector& w, const HyperplaneCov& polar,
                       double* t0 = nullptr, double* t1 = nullptr) {
  const auto d = x.size();
  const Vector& h = polar.coords();
  const auto [a, b] = body.chord_params(x, w);
  if (t0) *t0 = a;
  if (t1) *t1 = b;
  const Eigen::Vector2d q(-(h.head(d).dot(x) + h[d]), h.head(d).dot(w));
  return cross_ratio_1d({a, 1.0}, {b, 1.0}, {0.0, 1.0}, q).harmonic_deviation();
}

Vector homogeneous(const Vector& x) {
  Vector out(x.size() + 1);
  out << x, 1.0;
  return out;
}

}  // namespace

DeviationReport pole_check(const ConvexBody& body, const ProjPoint& p, const HyperplaneCov& polar,
                           std::size_t samples, std::uint64_t seed, double tolerance) {
  const int d = body.dim();
  if (!p.is_finite() || body.locate(p.chart()) != Location::Interior) {
    throw GeometryError(ErrorCode::PointNotInterior, "pole candidate is not an interior point");
  }
  const Vector x = p.chart();
  const Vector& h = polar.coords();
  DeviationReport report("pole", tolerance);
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = make_stream(seed, i);
    const Vector u = random_unit(rng, d);
    double t0 = 0, t1 = 0;
    double dev;
    try {
      dev = chord_deviation(body, x, u, polar, &t0, &t1);
    } catch (const GeometryError&) {
      report.skip();
      continue;
    }
    Vector qh(d + 1);
    qh << -(h.head(d).dot(x) + h[d]) * u + h.head(d).dot(u) * x, h.head(d).dot(u);
    report.add("chord", dev,
               "{\"A\":" + serialize(x + t0 * u) + ",\"B\":" + serialize(x + t1 * u) + ",\"p\":" + serialize(x) +
                   ",\"q\":" + serialize(qh) + "}");
  }
  return report;
}

namespace {

struct SectionPoleProblem {
  const SectionBody& section;
  const HyperplaneCov& polar;
  std::vector<Vector> directions;  // chart directions in the plane

  // Fills `out` with per-chord deviations; false when y is not interior.
  bool deviations(const Vector& y, std::vector<double>& out, double& excess) const {
    const Vector x = section.from_local(y);
    const double f = section.body().defining_function(x);
    excess = std::max(0.0, f);
    if (!(f < -1e-12)) return false;
    out.clear();
    try {
      for (const auto& w : directions) out.push_back(chord_deviation(section.body(), x, w, polar));
    } catch (const GeometryError&) {
      return false;
    }
    return true;
  }

  double mean_square(const Vector& y) const {
    std::vector<double> dev;
    double excess;
    if (!deviations(y, dev, excess)) return 1.0 + excess + 1e-3 * y.norm();
    double s = 0;
    for (double v : dev) s += v * v;
    return s / static_cast<double>(dev.size());
  }

  double worst(const Vector& y) const {
    std::vector<double> dev;
    double excess;
    if (!deviations(y, dev, excess)) return 1.0 + excess + 1e-3 * y.norm();
    return *std::max_element(dev.begin(), dev.end());
  }
};

}  // namespace

FalsePoleReport false_pole_check(const ConvexBody& body, const ProjPoint& p, const HyperplaneCov& polar,
                                 const FalsePoleOptions& options, std::span<const Vector> hints) {
  const int d = body.dim();
  if (d < 3) throw GeometryError(ErrorCode::DegenerateInput, "false pole test needs dimension >= 3");
  if (!p.is_finite() || body.locate(p.chart()) != Location::Interior) {
    throw GeometryError(ErrorCode::PointNotInterior, "point is not interior");
  }
  if (polar.contains(p)) throw GeometryError(ErrorCode::PointOnPolar, "point lies on H");
  const Vector x = p.chart();

  FalsePoleReport report;
  report.sections = DeviationReport("section_poles", options.tol_section);
  report.point_pole = pole_check(body, p, polar, options.pole_samples, options.seed, options.tol_pole);
  report.point_is_pole = report.point_pole.verdict() == Verdict::Pass;

  for (std::size_t j = 0; j < options.planes; ++j) {
    auto rng = make_stream(options.seed ^ 0x9e3779b97f4a7c15ULL, j);
    const Vector u = random_unit(rng, d);
    Vector v = random_unit(rng, d);
    v -= v.dot(u) * u;
    if (v.norm() < 1e-6) {
      report.sections.skip();
      continue;
    }
    v.normalize();
    Matrix cols(d + 1, 3);
    cols.col(0) = homogeneous(x);
    cols.col(1) << u, 0.0;
    cols.col(2) << v, 0.0;
    const Flat plane = Flat::from_span(cols);
    // The trace of H must be a line of the plane.
    if (numerical_rank(Matrix(plane.span().transpose() * polar.unit())) == 0) {
      report.sections.skip();
      continue;
    }
    const SectionBody section = hypersection(body, plane, p);

    SectionPoleProblem problem{section, polar, {}};
    for (std::size_t c = 0; c < options.chords; ++c) {
      const double theta = std::numbers::pi * (static_cast<double>(c) + 0.5) / static_cast<double>(options.chords);
      Vector local(2);
      local << std::cos(theta), std::sin(theta);
      problem.directions.push_back(section.basis() * local);
    }

    double scale = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
      Vector local(2);
      local << std::cos(k * std::numbers::pi / 4), std::sin(k * std::numbers::pi / 4);
      scale = std::min({scale, section.radius(local), section.radius(-local)});
    }

    std::vector<Vector> starts;
    starts.push_back(section.to_local(section.centroid(64)));
    starts.push_back(Vector::Zero(2));
    for (const auto& hint : hints) {
      const Vector y = section.to_local(hint);
      if (body.locate(section.from_local(y)) == Location::Interior) starts.push_back(y);
    }
    if (starts.size() > 3) starts.resize(3);

    const auto f_mean = [&](const Vector& y) { return problem.mean_square(y); };
    const auto f_max = [&](const Vector& y) { return problem.worst(y); };
    Vector best = starts.front();
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& y0 : starts) {
      Minimum m = nelder_mead(f_mean, y0, Vector::Constant(2, 0.1 * scale));
      m = nelder_mead(f_mean, m.x, Vector::Constant(2, 1e-3 * scale));
      if (m.value < best_value) best_value = m.value, best = m.x;
    }
    double delta = f_max(best);
    Vector pole = best;
    const Minimum refined = nelder_mead(f_max, best, Vector::Constant(2, 1e-3 * scale));
    if (refined.value < delta) delta = refined.value, pole = refined.x;

    const Vector pole_chart = section.from_local(pole);
    report.poles.push_back({u, v, pole_chart, delta});
    report.sections.add("plane", delta,
                        "{\"u\":" + serialize(u) + ",\"v\":" + serialize(v) + ",\"pole\":" + serialize(pole_chart) + "}");
  }
  return report;
}

}  // namespace harmony
