#include "harmony/projective.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace harmony {

namespace {

Matrix normalized_columns(const Matrix& columns) {
  Matrix out = columns;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (!(n > kZeroTolerance)) throw GeometryError(ErrorCode::ZeroVector, "zero column in flat");
    out.col(j) /= n;
  }
  return out;
}

struct SplitBasis {
  Matrix range;
  Matrix complement;
};

// Orthonormal bases of the column space and its orthogonal complement.
SplitBasis split(const Matrix& unit_columns, int rows) {
  if (unit_columns.cols() == 0) return {Matrix(rows, 0), Matrix::Identity(rows, rows)};
  Eigen::JacobiSVD<Matrix> svd(unit_columns, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankTolerance * sv[0]) ++rank;
  }
  const Matrix& u = svd.matrixU();
  return {u.leftCols(rank), u.rightCols(rows - rank)};
}

double det2(const Eigen::Vector2d& x, const Eigen::Vector2d& y) { return x[0] * y[1] - x[1] * y[0]; }

}  // namespace

Vector canonicalize(const Vector& raw) {
  if (raw.size() == 0) throw GeometryError(ErrorCode::ZeroVector, "empty coordinate vector");
  const double m = raw.cwiseAbs().maxCoeff();
  if (!(m > kZeroTolerance) || !std::isfinite(m)) {
    throw GeometryError(ErrorCode::ZeroVector, "homogeneous vector has no nonzero entry");
  }
  Vector out = raw / m;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (std::abs(out[i]) > 1e-12) {
      if (out[i] < 0) out = -out;
      break;
    }
  }
  return out;
}

ProjPoint::ProjPoint(const Vector& raw) : coords_(canonicalize(raw)) {}

ProjPoint ProjPoint::from_chart(const Vector& x) {
  Vector h(x.size() + 1);
  h << x, 1.0;
  return ProjPoint(h);
}

ProjPoint ProjPoint::at_infinity(const Vector& direction) {
  Vector h(direction.size() + 1);
  h << direction, 0.0;
  return ProjPoint(h);
}

bool ProjPoint::is_finite(double tol) const {
  return std::abs(coords_[coords_.size() - 1]) > tol;
}

Vector ProjPoint::chart() const {
  const double w = coords_[coords_.size() - 1];
  if (std::abs(w) <= 1e-14) throw GeometryError(ErrorCode::AtInfinity, "point lies at infinity");
  return coords_.head(coords_.size() - 1) / w;
}

HyperplaneCov::HyperplaneCov(const Vector& raw) : coords_(canonicalize(raw)) {}

HyperplaneCov HyperplaneCov::from_chart(const Vector& normal, double offset) {
  Vector h(normal.size() + 1);
  h << normal, offset;
  return HyperplaneCov(h);
}

HyperplaneCov HyperplaneCov::at_infinity(int d) {
  Vector h = Vector::Zero(d + 1);
  h[d] = 1.0;
  return HyperplaneCov(h);
}

double HyperplaneCov::evaluate(const ProjPoint& p) const {
  return coords_.normalized().dot(p.unit());
}

bool HyperplaneCov::contains(const ProjPoint& p, double tol) const {
  return std::abs(evaluate(p)) <= tol;
}

namespace {

// |sin| of the angle between two lines through the origin, accurate near 0.
double line_sine(const Vector& x, const Vector& y) {
  const Vector u = x.normalized(), v = y.normalized();
  return std::min(1.0, (v - v.dot(u) * u).norm());
}

}  // namespace

double distance(const ProjPoint& a, const ProjPoint& b) { return line_sine(a.coords(), b.coords()); }

double distance(const HyperplaneCov& a, const HyperplaneCov& b) { return line_sine(a.coords(), b.coords()); }

bool same_point(const ProjPoint& a, const ProjPoint& b, double tol) { return distance(a, b) <= tol; }

bool same_hyperplane(const HyperplaneCov& a, const HyperplaneCov& b, double tol) {
  return distance(a, b) <= tol;
}

int numerical_rank(const Matrix& columns, double tol) {
  if (columns.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(normalized_columns(columns));
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * sv[0]) ++rank;
  }
  return rank;
}

Flat Flat::from_span(const Matrix& columns) {
  if (columns.cols() == 0) throw GeometryError(ErrorCode::ZeroVector, "flat needs a spanning point");
  auto [range, complement] = split(normalized_columns(columns), static_cast<int>(columns.rows()));
  return Flat(std::move(range), std::move(complement));
}

Flat Flat::from_dual(const Matrix& columns) {
  const int rows = static_cast<int>(columns.rows());
  auto [range, complement] = split(columns.cols() ? normalized_columns(columns) : columns, rows);
  if (complement.cols() == 0) throw GeometryError(ErrorCode::EmptyMeet, "covectors have full rank");
  return Flat(std::move(complement), std::move(range));
}

Flat Flat::point(const ProjPoint& p) { return from_span(p.coords()); }

Flat Flat::hyperplane(const HyperplaneCov& h) { return from_dual(h.coords()); }

Flat Flat::line(const ProjPoint& a, const ProjPoint& b) {
  Flat f = join(a, b);
  if (f.dim() != 1) throw GeometryError(ErrorCode::DegeneratePair, "L(a, b) needs two distinct points");
  return f;
}

std::vector<ProjPoint> Flat::span_points() const {
  std::vector<ProjPoint> out;
  out.reserve(span_.cols());
  for (Eigen::Index j = 0; j < span_.cols(); ++j) out.emplace_back(span_.col(j));
  return out;
}

std::vector<HyperplaneCov> Flat::dual_covectors() const {
  std::vector<HyperplaneCov> out;
  out.reserve(dual_.cols());
  for (Eigen::Index j = 0; j < dual_.cols(); ++j) out.emplace_back(dual_.col(j));
  return out;
}

bool Flat::contains(const ProjPoint& p, double tol) const {
  if (dual_.cols() == 0) return true;
  return (dual_.transpose() * p.unit()).cwiseAbs().maxCoeff() <= tol;
}

bool Flat::contains(const Flat& f, double tol) const {
  if (dual_.cols() == 0) return true;
  return (dual_.transpose() * f.span()).cwiseAbs().maxCoeff() <= tol;
}

ProjPoint Flat::as_point() const {
  if (dim() != 0) throw GeometryError(ErrorCode::DegenerateInput, "flat is not a point");
  return ProjPoint(span_.col(0));
}

HyperplaneCov Flat::as_hyperplane() const {
  if (dual_.cols() != 1) throw GeometryError(ErrorCode::DegenerateInput, "flat is not a hyperplane");
  return HyperplaneCov(dual_.col(0));
}

Flat join(std::span<const Flat> items) {
  if (items.empty()) throw GeometryError(ErrorCode::DegenerateInput, "join of nothing");
  Eigen::Index cols = 0;
  for (const auto& f : items) cols += f.span().cols();
  Matrix stacked(items.front().span().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& f : items) {
    stacked.middleCols(at, f.span().cols()) = f.span();
    at += f.span().cols();
  }
  return Flat::from_span(stacked);
}

Flat join(const Flat& a, const Flat& b) {
  const std::array<Flat, 2> items{a, b};
  return join(std::span<const Flat>(items));
}

Flat join(const Flat& a, const ProjPoint& p) { return join(a, Flat::point(p)); }

Flat join(const ProjPoint& a, const ProjPoint& b) {
  Matrix m(a.coords().size(), 2);
  m << a.coords(), b.coords();
  return Flat::from_span(m);
}

Flat meet(const Flat& a, const Flat& b) {
  Matrix stacked(a.dual().rows(), a.dual().cols() + b.dual().cols());
  stacked << a.dual(), b.dual();
  return Flat::from_dual(stacked);
}

Flat meet(const Flat& a, const HyperplaneCov& h) { return meet(a, Flat::hyperplane(h)); }

ProjPoint intersect(const Flat& line, const HyperplaneCov& h) {
  if (line.dim() != 1) throw GeometryError(ErrorCode::DegenerateInput, "intersect expects a line");
  const Vector hu = h.unit();
  const Vector& a = line.span().col(0);
  const Vector& b = line.span().col(1);
  const Vector p = hu.dot(b) * a - hu.dot(a) * b;
  if (p.norm() < 1e-12) throw GeometryError(ErrorCode::LineInHyperplane, "line lies in the hyperplane");
  return ProjPoint(p);
}

CrossRatioValue::CrossRatioValue(double lambda, double mu) {
  const double n = std::hypot(lambda, mu);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw GeometryError(ErrorCode::IndeterminateRatio, "cross ratio 0:0");
  }
  lambda_ = lambda / n;
  mu_ = mu / n;
  if (mu_ < 0.0 || (mu_ == 0.0 && lambda_ < 0.0)) {
    lambda_ = -lambda_;
    mu_ = -mu_;
  }
}

double CrossRatioValue::value() const {
  if (mu_ == 0.0) return std::numeric_limits<double>::infinity();
  return lambda_ / mu_;
}

double CrossRatioValue::harmonic_deviation() const { return std::abs(lambda_ + mu_) / std::sqrt(2.0); }

double chordal_distance(const CrossRatioValue& a, const CrossRatioValue& b) {
  return std::abs(a.lambda() * b.mu() - a.mu() * b.lambda());
}

CrossRatioValue cross_ratio_1d(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                               const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  const Eigen::Vector2d au = a.normalized(), bu = b.normalized(), cu = c.normalized(),
                        du = d.normalized();
  const double sab = std::abs(det2(au, bu));
  if (!(sab > 1e-12)) throw GeometryError(ErrorCode::DegeneratePair, "a and b coincide");
  const double lambda = det2(cu, au) * det2(du, bu);
  const double mu = det2(cu, bu) * det2(du, au);
  if (std::hypot(lambda, mu) < 1e-12 * sab * sab) {
    throw GeometryError(ErrorCode::IndeterminateRatio, "cross ratio 0/0 (coincident points)");
  }
  return CrossRatioValue(lambda, mu);
}

CrossRatioValue cross_ratio(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                            const ProjPoint& d) {
  Matrix m(a.coords().size(), 4);
  m << a.unit(), b.unit(), c.unit(), d.unit();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() > 2 && sv[2] > kRankTolerance * sv[0]) {
    throw GeometryError(ErrorCode::NotCollinear, "cross ratio of non-collinear points");
  }
  if (!(sv[1] > kRankTolerance * sv[0])) {
    throw GeometryError(ErrorCode::DegeneratePair, "all four points coincide");
  }
  const Matrix basis = svd.matrixU().leftCols(2);
  const auto param = [&](const ProjPoint& p) -> Eigen::Vector2d { return basis.transpose() * p.unit(); };
  return cross_ratio_1d(param(a), param(b), param(c), param(d));
}

ProjPoint harmonic_conjugate(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
  if (distance(a, b) <= 1e-12) throw GeometryError(ErrorCode::DegeneratePair, "a equals b");
  Matrix m(a.coords().size(), 3);
  m << a.unit(), b.unit(), c.unit();
  if (numerical_rank(m) > 2) throw GeometryError(ErrorCode::NotCollinear, "a, b, c not collinear");
  const Matrix ab = m.leftCols(2);
  const Eigen::Vector2d coef = ab.householderQr().solve(c.unit());
  return ProjPoint(coef[0] * a.unit() - coef[1] * b.unit());
}

DiagonalPoints complete_quadrangle(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                                   const ProjPoint& d) {
  const std::array<const ProjPoint*, 4> v{&a, &b, &c, &d};
  Matrix all(a.coords().size(), 4);
  for (int i = 0; i < 4; ++i) all.col(i) = v[i]->unit();
  if (numerical_rank(all) != 3) {
    throw GeometryError(ErrorCode::DegenerateQuadrangle, "vertices do not span a 2-plane");
  }
  for (int skip = 0; skip < 4; ++skip) {
    Matrix triple(a.coords().size(), 3);
    for (int i = 0, j = 0; i < 4; ++i) {
      if (i != skip) triple.col(j++) = v[i]->unit();
    }
    if (numerical_rank(triple) < 3) {
      throw GeometryError(ErrorCode::DegenerateQuadrangle, "three vertices are collinear");
    }
  }
  return {meet(Flat::line(a, b), Flat::line(c, d)).as_point(),
          meet(Flat::line(a, c), Flat::line(d, b)).as_point(),
          meet(Flat::line(a, d), Flat::line(b, c)).as_point()};
}

CrossRatioValue pencil_cross_ratio(const HyperplaneCov& h1, const HyperplaneCov& h2,
                                   const HyperplaneCov& h3, const HyperplaneCov& h4,
                                   const Flat& transversal) {
  const std::array<const HyperplaneCov*, 4> hs{&h1, &h2, &h3, &h4};
  Matrix cov(h1.coords().size(), 4);
  for (int i = 0; i < 4; ++i) cov.col(i) = hs[i]->unit();
  if (numerical_rank(cov) != 2) {
    throw GeometryError(ErrorCode::NotAPencil, "hyperplanes do not share a common (d-2)-flat");
  }
  if (transversal.dim() != 1) throw GeometryError(ErrorCode::DegenerateInput, "transversal must be a line");
  std::vector<ProjPoint> pts;
  pts.reserve(4);
  for (int i = 0; i < 4; ++i) {
    try {
      pts.push_back(intersect(transversal, *hs[i]));
    } catch (const GeometryError& e) {
      if (e.code() != ErrorCode::LineInHyperplane) throw;
      throw GeometryError(ErrorCode::TransversalInPencilMember, "transversal lies in a pencil member");
    }
  }
  return cross_ratio(pts[0], pts[1], pts[2], pts[3]);
}

}  // namespace harmony
