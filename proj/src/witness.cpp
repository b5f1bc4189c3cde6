#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "harmony/analysis.hpp"
#include "harmony/optimize.hpp"
#include "harmony/random.hpp"

namespace harmony {

SectionPair sections_through(const ConvexBody& body, const ProjPoint& p1, const ProjPoint& p2, const Flat& l) {
  const Flat f1 = join(l, p1), f2 = join(l, p2);
  if (f1.dim() != body.dim() - 1 || f2.dim() != body.dim() - 1) {
    throw GeometryError(ErrorCode::DegenerateAxis, "join(l, p_i) is not a hyperplane");
  }
  return {f1.as_hyperplane(), f2.as_hyperplane(), hypersection(body, f1, p1), hypersection(body, f2, p2)};
}

double mapping_residual(const HarmonicHomology& phi, const SectionBody& from, const SectionBody& to,
                        std::size_t samples) {
  double worst = 0.0;
  for (const auto& s : from.sample_boundary(samples)) {
    worst = std::max(worst, to.boundary_distance(phi.apply(ProjPoint::from_chart(s))));
  }
  return worst;
}

WitnessHomology ellipsoid_witness(const ConvexBody& ellipsoid, const HyperplaneCov& polar, const ProjPoint& p1,
                                  const ProjPoint& p2, const Flat& l, std::size_t samples) {
  const Ellipsoid* e = ellipsoid.as_ellipsoid();
  if (!e) throw GeometryError(ErrorCode::InvalidBody, "ellipsoid witness needs an ellipsoid");
  const auto [g, h] = construct_g(p1, p2, polar);
  if (distance(g, quadric_pole(e->quadric, polar)) > 1e-8) {
    throw GeometryError(ErrorCode::FixtureViolation, "g is not the pole of H");
  }
  if (l.contains(h)) throw GeometryError(ErrorCode::DegenerateAxis, "l contains h, so both sections coincide");
  const Flat axis_flat = join(l, g);
  if (axis_flat.dim() != ellipsoid.dim() - 1) throw GeometryError(ErrorCode::DegenerateAxis, "join(l, g) degenerates");
  const HyperplaneCov axis = axis_flat.as_hyperplane();
  const ProjPoint center = quadric_pole(e->quadric, axis);
  try {
    HarmonicHomology phi(axis, center);
    const SectionPair pair = sections_through(ellipsoid, p1, p2, l);
    const double residual = mapping_residual(phi, pair.k1, pair.k2, samples);
    return {l, phi, residual};
  } catch (const GeometryError& err) {
    if (err.code() == ErrorCode::CenterOnAxis) throw GeometryError(ErrorCode::DegenerateAxis, "center lies on the axis");
    throw;
  }
}

namespace {

// Orthonormal basis of the points on a hyperplane, (d+1) x d.
Matrix hyperplane_points(const HyperplaneCov& h) {
  Eigen::JacobiSVD<Matrix> svd(Matrix(h.unit().transpose()), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(h.ambient_dim());
}

class WitnessObjective {
 public:
  WitnessObjective(const Flat& l, const ProjPoint& p1, const ProjPoint& p2, const SectionPair& pair,
                   std::size_t samples, double cap)
      : pair_(pair), cap_(cap) {
    e1_ = p1.unit();
    e2_ = p2.unit() - p2.unit().dot(e1_) * e1_;
    e2_.normalize();
    c1_ = l.dual().col(0);
    c2_ = l.dual().col(1);
    s1_ = pair.k1.sample_boundary(samples);
    s2_ = pair.k2.sample_boundary(samples);
  }

  double probe_angle(const ProjPoint& x) const {
    const Vector u = x.unit();
    return std::atan2(u.dot(e2_), u.dot(e1_));
  }

  Vector axis(double s) const {
    const Vector x = std::cos(s) * e1_ + std::sin(s) * e2_;
    return c2_.dot(x) * c1_ - c1_.dot(x) * c2_;
  }

  // Mean squared (or plain) distance of mapped samples, both directions.
  double operator()(const Vector& axis_raw, const Vector& center_raw, bool squared) const {
    if (axis_raw.norm() < 1e-12 || center_raw.norm() < 1e-12) return penalty();
    const double tilt = std::abs(axis_raw.normalized().dot(center_raw.normalized()));
    if (tilt < 1e-10) return penalty();
    const HarmonicHomology phi(HyperplaneCov{axis_raw}, ProjPoint{center_raw});
    double acc = 0.0;
    const auto run = [&](const std::vector<Vector>& from, const SectionBody& to) {
      for (const auto& s : from) {
        const ProjPoint image = phi.apply(ProjPoint::from_chart(s));
        double dist = image.is_finite(1e-9) ? std::min(cap_, to.boundary_distance(image.chart())) : cap_;
        if (!std::isfinite(dist)) dist = cap_;
        acc += squared ? dist * dist : dist;
      }
    };
    run(s1_, pair_.k2);
    run(s2_, pair_.k1);
    return acc / static_cast<double>(s1_.size() + s2_.size());
  }

  double penalty() const { return 4.0 * cap_ * cap_; }

 private:
  const SectionPair& pair_;
  double cap_;
  Vector e1_, e2_, c1_, c2_;
  std::vector<Vector> s1_, s2_;
};

}  // namespace

WitnessHomology witness_search(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                               const ProjPoint& p2, const Flat& l, const WitnessSearchOptions& options) {
  const int d = body.dim();
  const auto [g, h] = construct_g(p1, p2, polar);
  const Matrix on_h = hyperplane_points(polar);

  if (l.contains(h)) {
    // Both sections lie in one hyperplane, which the homology fixes pointwise.
    const HyperplaneCov axis = join(l, p1).as_hyperplane();
    Eigen::Index best = 0;
    (on_h.transpose() * axis.unit()).cwiseAbs().maxCoeff(&best);
    const HarmonicHomology phi(axis, ProjPoint(on_h.col(best)));
    const SectionBody k1 = hypersection(body, Flat::hyperplane(axis), p1);
    const SectionBody k2 = hypersection(body, Flat::hyperplane(axis), p2);
    return {l, phi, std::max(mapping_residual(phi, k1, k2, options.final_samples),
                             mapping_residual(phi, k2, k1, options.final_samples))};
  }

  const SectionPair pair = sections_through(body, p1, p2, l);
  double scale = 0.0;
  for (const auto& s : pair.k1.sample_boundary(16)) scale = std::max(scale, (s - pair.k1.seed()).norm());
  const double cap = 10.0 * scale;
  const WitnessObjective search(l, p1, p2, pair, options.search_samples, cap);
  const WitnessObjective final_check(l, p1, p2, pair, options.final_samples, cap);

  // Candidate centers on H.
  std::vector<Vector> candidates;
  const auto add_candidate = [&](const auto& make) {
    try {
      const ProjPoint t = make();
      Vector v = on_h * (on_h.transpose() * t.unit());
      if (v.norm() > 1e-9) candidates.push_back(v.normalized());
    } catch (const GeometryError&) {
    }
  };
  const Vector c1 = pair.k1.centroid(), c2 = pair.k2.centroid();
  add_candidate([&] { return intersect(Flat::line(ProjPoint::from_chart(c1), ProjPoint::from_chart(c2)), polar); });
  add_candidate([&] { return intersect(Flat::line(g, ProjPoint::from_chart(c1)), polar); });
  add_candidate([&] {
    Vector x(d + 1);
    x << body.interior_point(), 1.0;
    return ProjPoint(on_h * (on_h.transpose() * x));
  });
  if (candidates.empty()) throw GeometryError(ErrorCode::SearchFailed, "no center candidate on H");

  const double s_g = search.probe_angle(g);
  double best_value = std::numeric_limits<double>::infinity();
  Vector best_axis, best_center;
  for (int k = 0; k < options.starts; ++k) {
    auto rng = make_stream(options.seed, static_cast<std::uint64_t>(k));
    const Vector& t0 = candidates[static_cast<std::size_t>(k) % candidates.size()];
    // Local chart of H around t0.
    Matrix rest = on_h - t0 * (t0.transpose() * on_h);
    Eigen::JacobiSVD<Matrix> svd(rest, Eigen::ComputeThinU);
    const Matrix tangent = svd.matrixU().leftCols(d - 1);

    const bool perturb = static_cast<std::size_t>(k) >= candidates.size();
    Vector theta = Vector::Zero(d);
    theta[0] = s_g + (perturb ? uniform(rng, -0.3, 0.3) : 0.0);
    if (perturb) theta.tail(d - 1) = 0.3 * random_normal(rng, d - 1);

    const auto objective = [&](const Vector& th) {
      return search(search.axis(th[0]), t0 + tangent * th.tail(d - 1), true);
    };
    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    Minimum m = nelder_mead(objective, theta, Vector::Constant(d, 0.05), nm);
    m = nelder_mead(objective, m.x, Vector::Constant(d, 1e-3), nm);
    m = nelder_mead(objective, m.x, Vector::Constant(d, 1e-6), nm);
    if (m.value < best_value) {
      best_value = m.value;
      best_axis = search.axis(m.x[0]);
      best_center = t0 + tangent * m.x.tail(d - 1);
    }
  }
  if (!(best_value < search.penalty())) throw GeometryError(ErrorCode::SearchFailed, "every start is invalid");

  const HarmonicHomology phi(HyperplaneCov{best_axis}, ProjPoint{best_center});
  return {l, phi, final_check(best_axis, best_center, false)};
}

std::vector<Flat> chords_through(const ConvexBody& body, const ProjPoint& g, std::size_t n, std::uint64_t seed) {
  const int d = body.dim();
  const bool inside = g.is_finite() && body.locate(g.chart()) == Location::Interior;
  std::vector<Flat> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = make_stream(seed, i);
    const Vector u = random_unit(rng, d);
    Vector target;
    if (inside) {
      target = g.chart() + u;
    } else {
      const Vector& c = body.interior_point();
      target = c + uniform(rng, 0.0, 0.8) * body.ray_exit(c, u) * u;
    }
    out.push_back(Flat::line(g, ProjPoint::from_chart(target)));
  }
  return out;
}

FlatSample sample_flats_in(const HyperplaneCov& polar, const ProjPoint& avoid, std::size_t n, std::uint64_t seed) {
  const int d = polar.ambient_dim();
  const Vector h = polar.unit();
  FlatSample out;
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = make_stream(seed, i);
    Vector c = random_normal(rng, d + 1);
    c -= c.dot(h) * h;
    Matrix dual(d + 1, 2);
    dual.col(0) = h;
    dual.col(1) = c.normalized();
    Flat l = Flat::from_dual(dual);
    if (l.contains(avoid)) {
      ++out.skipped;
      continue;
    }
    out.flats.push_back(std::move(l));
  }
  return out;
}

}  // namespace harmony
