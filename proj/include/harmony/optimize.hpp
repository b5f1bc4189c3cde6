#pragma once

#include <functional>

#include "harmony/projective.hpp"

namespace harmony {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double size_tolerance = 1e-12;  // stop once the simplex is this small
};

struct Minimum {
  Vector x;
  double value;
  int iterations;
};

/// Derivative-free simplex minimization from x0 with initial vertex offsets `step`.
/// The objective must return finite values; use a penalty for infeasible points.
Minimum nelder_mead(const std::function<double(const Vector&)>& objective, const Vector& x0, const Vector& step,
                    const NelderMeadOptions& options = {});

}  // namespace harmony
