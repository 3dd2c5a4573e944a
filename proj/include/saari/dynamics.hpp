#pragma once

#include <string_view>
#include <vector>

#include "saari/shape_geometry.hpp"

namespace saari {

/// One output sample of an integrated orbit.  E and C are recomputed from
/// the Cartesian state at the sample as drift diagnostics.
struct TrajectorySample {
  double t = 0.0;
  double s = 0.0;
  PlanarConfig config;
  ShapePoint shape;
  double I = 0.0;
  double theta = 0.0;
  double E = 0.0;
  double C = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt_sample = 0.0;
  bool collision_abort = false;
};

struct IntegratorConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double t_span = 10.0;
  double dt_sample = 1e-3;
  double max_step = 0.0;       // 0 = cap steps at dt_sample
  double min_distance = 1e-6;  // mutual-distance abort threshold
};

/// Newtonian accelerations a_i = sum_{j != i} (q_j - q_i)/|q_j - q_i|^3.
std::array<Vec2, 3> newton_acceleration(const PlanarConfig& config);

/// Total energy and angular momentum (E, C) from the Cartesian state.
std::pair<double, double> conserved_quantities(const PlanarConfig& config);

/// (E, C) assembled from the reduced variables (I, theta, zeta) and their
/// time derivatives; agrees with conserved_quantities on valid states.
std::pair<double, double> reduced_conserved_quantities(const PlanarConfig& config);

/// d zeta/dt from the Cartesian velocities.
Complex shape_time_derivative(const PlanarConfig& config);

/// ds/dt = (1 + (4/3)|zeta|^2) / (2 I).
double s_time_rate(const ShapePoint& shape, double I);

/// Integrate the Cartesian equations of motion; samples uniformly at
/// cfg.dt_sample and fills the reduced per-sample quantities.  Sets
/// collision_abort and truncates when any mutual distance drops below
/// cfg.min_distance.
Trajectory integrate_cartesian(const PlanarConfig& state0, const IntegratorConfig& cfg);

/// s values per sample by trapezoidal quadrature of ds/dt; s(t0) = 0.
std::vector<double> reparametrize_time(const Trajectory& traj);

/// Residual of I'' = 4E + 2U per interior sample (index k corresponds to
/// samples[k+1]).
std::vector<double> lagrange_jacobi_residual(const Trajectory& traj);

/// Residual of d/ds(|dx/ds|^2 / 6) = sqrt(I) dmu/ds per interior sample.
std::vector<double> saari_relation_residual(const Trajectory& traj);

/// Residual 2-vector of the shape equation of motion in s per interior
/// sample; samples closer than 1e-3 to a collision give NaN entries.
std::vector<Vec2> shape_eom_residual(const Trajectory& traj);

/// Integrate the reduced system: shape by its s-equation of motion, I by
/// I'' = 4E + 2U, theta by the angular-momentum closure, with s as an
/// auxiliary quadrature variable.  dshape0_ds is d zeta/ds at t = 0.
/// Throws when the initial data are inconsistent with E beyond 1e-8.
Trajectory integrate_reduced(const ShapePoint& shape0, const Vec2& dshape0_ds, double I0,
                             double dI0_dt, double theta0, double E, double C,
                             const IntegratorConfig& cfg);

/// Reduced initial data extracted from a Cartesian state, ready to feed
/// integrate_reduced.
struct ReducedStart {
  ShapePoint shape;
  Vec2 dshape_ds = Vec2::Zero();
  double I = 0.0;
  double dI_dt = 0.0;
  double theta = 0.0;
  double E = 0.0;
  double C = 0.0;
};

ReducedStart reduced_initial_data(const PlanarConfig& config);

struct Fixture {
  PlanarConfig config;
  double E = 0.0;
  double C = 0.0;
};

/// Named initial conditions: lagrange_circular, euler_collinear_circular,
/// equilateral_freefall, generic_perturbed.
Fixture fixture_orbit(std::string_view name);

}  // namespace saari
