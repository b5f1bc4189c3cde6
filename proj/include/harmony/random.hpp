#pragma once

#include <cstdint>
#include <random>

#include "harmony/projective.hpp"

namespace harmony {

using Rng = std::mt19937_64;

/// Independent generator for work item `index` of a run seeded with `seed`;
/// results never depend on the order in which work items are processed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector random_normal(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Uniform on the unit sphere S^{n-1}.
inline Vector random_unit(Rng& rng, int n) {
  for (;;) {
    Vector v = random_normal(rng, n);
    const double len = v.norm();
    if (len > 1e-6) return v / len;
  }
}

}  // namespace harmony
