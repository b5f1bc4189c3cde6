#include <cmath>

#include <Eigen/Dense>

#include "harmony/body.hpp"

namespace harmony {

HyperplaneCov quadric_polar(const Matrix& quadric, const ProjPoint& p) {
  if (quadric.rows() != p.coords().size()) throw GeometryError(ErrorCode::DegenerateInput, "dimension mismatch");
  return HyperplaneCov(quadric * p.coords());
}

ProjPoint quadric_pole(const Matrix& quadric, const HyperplaneCov& h) {
  if (quadric.rows() != h.coords().size()) throw GeometryError(ErrorCode::DegenerateInput, "dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(quadric);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw GeometryError(ErrorCode::SingularQuadric, "quadric matrix is singular");
  return ProjPoint(lu.solve(h.coords()));
}

Matrix normalize_quadric(const Matrix& quadric) {
  Matrix q = 0.5 * (quadric + quadric.transpose());
  const double norm = q.norm();
  if (!(norm > 0)) throw GeometryError(ErrorCode::ZeroVector, "zero quadric");
  q /= norm;
  const auto d = q.rows() - 1;
  double trace = q.topLeftCorner(d, d).trace();
  if (std::abs(trace) < 1e-12) {
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (std::abs(q.data()[i]) > 1e-12) {
        trace = q.data()[i];
        break;
      }
    }
  }
  if (trace < 0) q = -q;
  return q;
}

double quadric_distance(const Matrix& a, const Matrix& b) {
  const Matrix na = normalize_quadric(a), nb = normalize_quadric(b);
  return std::min((na - nb).norm(), (na + nb).norm());
}

bool has_ellipsoid_signature(const Matrix& quadric) {
  const Matrix q = normalize_quadric(quadric);
  const auto d = q.rows() - 1;
  const Matrix a = q.topLeftCorner(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a);
  const auto& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 1e-9 * ev.cwiseAbs().maxCoeff())) return false;
  const Vector b = q.topRightCorner(d, 1);
  return q(d, d) - b.dot(a.ldlt().solve(b)) < -1e-12;
}

QuadricFit fit_quadric(std::span<const Vector> samples) {
  if (samples.empty()) throw GeometryError(ErrorCode::InsufficientSamples, "no samples");
  const auto d = samples.front().size();
  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index terms = (d + 1) * (d + 2) / 2;
  if (n < terms) {
    throw GeometryError(ErrorCode::InsufficientSamples,
                        "need at least " + std::to_string(terms) + " samples, got " + std::to_string(n));
  }

  Vector mean = Vector::Zero(d);
  for (const auto& s : samples) mean += s;
  mean /= static_cast<double>(n);
  double spread = 0.0;
  for (const auto& s : samples) spread += (s - mean).squaredNorm();
  spread = std::sqrt(spread / static_cast<double>(n));
  if (!(spread > 1e-300)) throw GeometryError(ErrorCode::DegenerateSampleSet, "samples coincide");

  // Off-diagonal monomials carry sqrt(2) so that |coefficients| = |Q|_F.
  const double root2 = std::sqrt(2.0);
  Matrix design(n, terms);
  for (Eigen::Index r = 0; r < n; ++r) {
    Vector y(d + 1);
    y << (samples[r] - mean) / spread, 1.0;
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i <= d; ++i) {
      for (Eigen::Index j = i; j <= d; ++j) design(r, c++) = (i == j ? 1.0 : root2) * y[i] * y[j];
    }
  }
  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv[terms - 2] > 1e-10 * sv[0])) {
    throw GeometryError(ErrorCode::DegenerateSampleSet, "samples do not determine a unique quadric");
  }
  const Vector coef = svd.matrixV().col(terms - 1);

  Matrix qy(d + 1, d + 1);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i <= d; ++i) {
    for (Eigen::Index j = i; j <= d; ++j) {
      const double v = i == j ? coef[c] : coef[c] / root2;
      qy(i, j) = qy(j, i) = v;
      ++c;
    }
  }
  Matrix to_normalized = Matrix::Identity(d + 1, d + 1) / spread;
  to_normalized.topRightCorner(d, 1) = -mean / spread;
  to_normalized(d, d) = 1.0;
  const Matrix qx = normalize_quadric(to_normalized.transpose() * qy * to_normalized);

  QuadricFit fit;
  fit.quadric = qx;
  fit.residual = sv[terms - 1] / std::sqrt(static_cast<double>(n));
  fit.ellipsoid_signature = has_ellipsoid_signature(qx);
  return fit;
}

}  // namespace harmony
