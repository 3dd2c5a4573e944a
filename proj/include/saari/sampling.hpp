#pragma once

#include <random>

#include "saari/dynamics.hpp"
#include "saari/shape_geometry.hpp"

namespace saari {

/// Uniform random shape in the disk |zeta| <= 3, excluding 1e-3
/// neighborhoods of the two collision points +-1/2 (which also covers the
/// cyclic-map pole).
inline ShapePoint sample_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    const double r = 3.0 * std::sqrt(unit(rng));
    const double phi = 2.0 * M_PI * unit(rng);
    const ShapePoint z{r * std::cos(phi), r * std::sin(phi)};
    if (std::hypot(z.x - 0.5, z.y) > 1e-3 && std::hypot(z.x + 0.5, z.y) > 1e-3) return z;
  }
}

/// Random perturbation of the Lagrange circular fixture, recentered to the
/// center-of-mass frame with zero total momentum.
inline PlanarConfig sample_orbit_start(std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> delta(-amplitude, amplitude);
  PlanarConfig c = fixture_orbit("lagrange_circular").config;
  for (int k = 0; k < 3; ++k) {
    c.q[k] += Vec2(delta(rng), delta(rng));
    c.v[k] += Vec2(delta(rng), delta(rng));
  }
  c.recenter();
  return c;
}

}  // namespace saari
