#pragma once

#include "harmony/projective.hpp"

namespace harmony {

// Harmonic homology with axis hyperplane G and center tau (tau not on G).
// Representative matrix: M x = (G.tau) x - 2 (G.x) tau, so M^2 = (G.tau)^2 I.
class HarmonicHomology {
 public:
  /// Throws CenterOnAxis when tau lies on G.
  HarmonicHomology(HyperplaneCov axis, ProjPoint center);

  const HyperplaneCov& axis() const { return axis_; }
  const ProjPoint& center() const { return center_; }
  const Matrix& matrix() const { return matrix_; }

  ProjPoint apply(const ProjPoint& x) const;
  /// Hyperplanes transform by the inverse transpose, which is proportional to M^T.
  HyperplaneCov apply(const HyperplaneCov& h) const;
  Flat apply(const Flat& f) const;

 private:
  HyperplaneCov axis_;
  ProjPoint center_;
  Matrix matrix_;
};

HarmonicHomology make_homology(const HyperplaneCov& axis, const ProjPoint& center);

inline ProjPoint apply_point(const HarmonicHomology& phi, const ProjPoint& x) { return phi.apply(x); }
inline HyperplaneCov apply_hyperplane(const HarmonicHomology& phi, const HyperplaneCov& h) {
  return phi.apply(h);
}

/// The affine reflection of the chart in `hyperplane` along `direction`,
/// seen as the harmonic homology whose center is the direction's point at infinity.
HarmonicHomology homology_from_affine_reflection(const HyperplaneCov& hyperplane, const Vector& direction);

}  // namespace harmony
