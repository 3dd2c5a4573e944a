#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <utility>

namespace saari {

using Vec2 = Eigen::Vector2d;
using Complex = std::complex<double>;

/// Mutual distances below this are treated as collisions by every
/// operation that divides by them.
inline constexpr double kCollisionEps = 1e-13;

/// Radius around the cyclic-map pole (zeta = 1/2) that is rejected.
inline constexpr double kMapPoleEps = 1e-10;

/// Planar configuration of three unit-mass bodies, center of mass at the
/// origin.  Positions q[k] and velocities v[k], k = 0,1,2 for bodies 1..3.
/// Default-constructed configurations are all-zero (Eigen's own default
/// constructor would leave the coefficients uninitialized).
struct PlanarConfig {
  std::array<Vec2, 3> q{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  std::array<Vec2, 3> v{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};

  Vec2 center_of_mass() const { return (q[0] + q[1] + q[2]) / 3.0; }
  Vec2 total_momentum() const { return v[0] + v[1] + v[2]; }

  /// Shift positions/velocities into the center-of-mass frame.
  void recenter() {
    const Vec2 c = center_of_mass();
    const Vec2 p = total_momentum() / 3.0;
    for (auto& qi : q) qi -= c;
    for (auto& vi : v) vi -= p;
  }

  double pair_distance(int i, int j) const { return (q[i] - q[j]).norm(); }

  double min_pair_distance() const;

  /// Moment of inertia sum |q_k|^2 (equal to the mass-weighted definition
  /// in the center-of-mass frame).
  double moment_of_inertia() const {
    return q[0].squaredNorm() + q[1].squaredNorm() + q[2].squaredNorm();
  }
};

/// Dimensionless shape coordinate zeta = x + iy on the shape plane.
struct ShapePoint {
  double x = 0.0;
  double y = 0.0;

  Complex zeta() const { return {x, y}; }
  double norm_sq() const { return x * x + y * y; }

  static ShapePoint from(Complex z) { return {z.real(), z.imag()}; }
};

/// Per-pair measures mu_k = sqrt(I)/r_ij, all positive away from collision.
struct MuParts {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
};

/// Elementary symmetric functions of (mu1, mu2, mu3).  On physical shapes
/// they satisfy nu^2 = 2*mu*rho + 3*rho^2 and mu >= 3, rho >= 1.
struct SymmetricInvariants {
  double mu = 0.0;
  double nu = 0.0;
  double rho = 0.0;
};

/// Size and orientation split off by the shape reduction.
struct SizeOrientation {
  double I = 0.0;      // moment of inertia
  double theta = 0.0;  // orientation angle, in (-pi, pi]
};

/// Map a planar configuration to its shape point plus (I, theta).
/// theta is the argument of q2 - q1, which makes the roundtrip with
/// reconstruct_configuration exact.
/// Throws std::domain_error on the q1 = q2 collision ("shape coordinate
/// singular") and on total collapse I = 0.
std::pair<ShapePoint, SizeOrientation> reduce_configuration(const PlanarConfig& config);

/// Inverse of reduce_configuration: builds the configuration with the given
/// shape, size and orientation and zero velocities.  Requires I > 0.
PlanarConfig reconstruct_configuration(const ShapePoint& shape, const SizeOrientation& size_orient);

/// r1 = |zeta - 1/2|, r2 = |zeta + 1/2| (distance ratios r23/r12, r31/r12).
std::pair<double, double> shape_ratios(const ShapePoint& shape);

/// mu3 = sqrt(1/2 + (2/3)|zeta|^2).
double mu3_from_zeta(const ShapePoint& shape);

/// mu3 = sqrt((1 + r1^2 + r2^2)/3); agrees with mu3_from_zeta.
double mu3_from_ratios(double r1, double r2);

/// Per-pair measures at a shape point.  Throws on collision (r1 or r2 ~ 0).
MuParts mu_parts(const ShapePoint& shape);

/// Elementary symmetric functions of the parts.
SymmetricInvariants symmetric_invariants(const MuParts& parts);

/// Image of zeta under the cyclic relabeling of the bodies:
/// zeta' = (1/2)(3/2 + zeta)/(1/2 - zeta).  Applying it three times is the
/// identity.  Throws std::domain_error near the pole zeta = 1/2.
ShapePoint cyclic_shape_map(const ShapePoint& shape);

/// Complex derivative of the cyclic map, 1/(1/2 - zeta)^2, used to push
/// shape velocities forward through the map.
Complex cyclic_map_derivative(const ShapePoint& shape);

/// zeta -> -zeta (swap of bodies 1 and 2).
ShapePoint reflect_shape_map(const ShapePoint& shape);

/// Squared shape-sphere speed of a shape velocity dzeta at zeta:
/// (4/3)|dzeta|^2 / (1 + (4/3)|zeta|^2)^2.  Invariant under both symmetry
/// maps when dzeta is pushed forward by the map derivative.
double shape_metric_speed(const ShapePoint& shape, const Vec2& dshape);

/// Prefactor 2(r1^2 + r2^2) - (r1^2 - r2^2)^2 - 1 appearing in the shape-
/// plane expression for (D rho)^2; vanishes exactly on collinear shapes
/// (it equals 4 y^2) and is positive otherwise.
double collinearity_indicator(const ShapePoint& shape);

}  // namespace saari
