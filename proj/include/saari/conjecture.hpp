#pragma once

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "saari/dynamics.hpp"
#include "saari/invariant_fields.hpp"
#include "saari/shape_geometry.hpp"

namespace saari {

/// Parameters of the constant-mu analysis.  The shape speed is fixed to
/// sqrt(3) by the scale normalization and the direction sign epsilon is
/// absorbed into C.
struct NecessaryConditionContext {
  double mu0 = 3.0;
  double C = 0.0;
  double E = 0.0;
  double v = std::numbers::sqrt3;
};

/// Coefficients of sqrt(I) = a0 + a_half sqrt(rho) + a1 rho + O(rho^{3/2}).
struct SeriesCoefficients {
  double a0 = 0.0;
  double a_half = 0.0;
  double a1 = 0.0;
};

/// Leading coefficients of the energy identity's expansion in sqrt(rho).
struct EnergySeriesCoefficients {
  double e0 = 0.0;
  double e_half = 0.0;
  double e1 = 0.0;
};

/// Shape velocity sqrt(3) * epsilon * perp(grad mu)/|grad mu| along the mu
/// level set.  Throws at critical points.
Vec2 level_set_velocity(const ShapePoint& shape, int epsilon);

/// Curvature of the constant-mu orbit through `shape`, from its velocity and
/// acceleration.  ctx.C is the absorbed (epsilon-folded) angular momentum.
double orbit_curvature(const ShapePoint& shape, const NecessaryConditionContext& ctx, double sqrt_I,
                       int epsilon);

/// Curvature of the implicit curve mu(x) = const at `shape` (orientation
/// epsilon = +1).
double level_curvature(const ShapePoint& shape);

/// Curvature of the implicit curve f = const from supplied partials.
double implicit_curve_curvature(double fx, double fy, double fxx, double fxy, double fyy);

/// sqrt(I) demanded of a constant-mu motion, in the invariant form
/// -2C/|grad mu| + lambda/(2 |grad mu|^4) - laplacian/|grad mu|^2, evaluated
/// through the (mu, rho) closed forms.  Scalar-generic.
template <typename Scalar>
Scalar required_sqrt_I_closed(Scalar mu, Scalar rho, Scalar C) {
  using std::sqrt;
  const Scalar g2 = grad_norm_sq_closed(mu, rho);
  return -2.0 * C / sqrt(g2) + lambda_closed(mu, rho) / (2.0 * g2 * g2) -
         laplacian_closed(mu, rho) / g2;
}

/// Double-precision entry point; throws at critical points (|grad mu|^2 <= 0).
double required_sqrt_I(double mu, double rho, double C);
double required_sqrt_I(const SymmetricInvariants& inv, double C);

/// The same quantity from the shape-plane expression (first and second
/// partials of mu); cross-checks the closed-form route.
double required_sqrt_I_xy(const ShapePoint& shape, double C);

/// Right-hand side of the energy identity at (ctx.mu0, rho); nullopt when
/// the condition demands sqrt(I) <= 0 ("unphysical required size").
std::optional<double> energy_rhs(double mu0, double rho, double C);

/// energy_rhs minus ctx.E.
std::optional<double> energy_residual(double rho, const NecessaryConditionContext& ctx);

/// Closed-form series coefficients of sqrt(I) near rho = 0.
SeriesCoefficients series_coefficients(double mu0, double C);

/// The two angular momenta that kill the sqrt(rho) coefficient of the
/// energy expansion: -1/sqrt(2 mu^2 - 1) and (mu^2 - 2)/(2 sqrt(2 mu^2 - 1)).
std::pair<double, double> branch_C_values(double mu0);

/// Closed-form sqrt(rho)-order coefficient of the energy expansion as a
/// function of C; zero exactly at the two branch values.
double sqrt_rho_coefficient(double mu0, double C);

/// Order-rho coefficient of the energy expansion on branch 1 or 2; negative
/// resp. positive for all mu0 >= 3, which is the obstruction completing the
/// constant-mu exclusion.
double order_rho_obstruction(double mu0, int branch);

/// Least-squares fit of required_sqrt_I over the small-rho window; recovers
/// the closed-form coefficients.
SeriesCoefficients fit_sqrt_I_series(double mu0, double C);

/// Least-squares fit of energy_rhs over the same window.
EnergySeriesCoefficients fit_energy_series(double mu0, double C);

// ---------------------------------------------------------------------------
// Level sets
// ---------------------------------------------------------------------------

struct LevelSetVertex {
  double x = 0.0, y = 0.0, mu = 0.0, rho = 0.0;
};

struct LevelSetTrace {
  std::vector<LevelSetVertex> vertices;
  bool closed = false;
  bool truncated = false;  // left |zeta| <= r_max or hit the vertex cap
  double rho_min = 0.0;
  double rho_max = 0.0;
};

struct TraceOptions {
  double base_step = 1e-3;
  double corrector_tol = 1e-10;
  double r_max = 10.0;
  long max_vertices = 500'000;
};

/// Predictor-corrector continuation of mu(x) = mu0 from a seed on the level
/// set (|mu(seed) - mu0| <= 1e-6 required).
LevelSetTrace trace_level_set(double mu0, const ShapePoint& seed, const TraceOptions& opts = {});

/// Find a point with mu = mu0 by bisection along the segment from an anchor
/// ("lagrange" or "euler") toward the two-body collision at zeta = 1/2.
/// Throws when the level does not cross the segment.
ShapePoint find_level_seed(double mu0, std::string_view anchor = "lagrange");

// ---------------------------------------------------------------------------
// Central configurations and trajectory classification
// ---------------------------------------------------------------------------

struct CentralConfiguration {
  ShapePoint shape;
  double mu = 0.0;
};

/// The five critical points of mu: the two equilateral shapes (mu = 3) and
/// the three collinear ones (mu = 5/sqrt(2)); each checked to have
/// |grad mu|^2 <= 1e-10.
std::vector<CentralConfiguration> central_configurations();

/// Newton refinement of a critical point of mu from a nearby guess.
ShapePoint refine_critical_point(const ShapePoint& guess);

struct TrajectoryClassification {
  double mu_drift = 0.0;     // max |mu(t) - mean mu|
  double shape_drift = 0.0;  // max |zeta(t) - zeta(0)|
  std::string verdict;       // "homographic" | "constant-mu non-homographic candidate" | "generic"
};

TrajectoryClassification classify_trajectory(const Trajectory& traj, double tol);

// ---------------------------------------------------------------------------
// Proof verification
// ---------------------------------------------------------------------------

struct ProofEntry {
  double mu0 = 0.0;
  double C1 = 0.0, C2 = 0.0;
  double obstruction1 = 0.0, obstruction2 = 0.0;
  double series_fit_error = 0.0;  // worst coefficient error of the branch fits
  SeriesCoefficients branch1_series, branch2_series;
  bool ok = false;
};

struct ProofReport {
  std::vector<ProofEntry> entries;
  double min_abs_obstruction = 0.0;
  bool holds = false;
};

/// For each mu0 in the grid: branch roots, obstruction signs, and branch
/// series fits.  Verdict holds iff branch-1 < 0 and branch-2 > 0 throughout.
/// fit_stride > 1 limits the (more expensive) series fits to every n-th
/// grid point; sign checks always run everywhere.
ProofReport verify_no_constant_mu_orbit(std::span<const double> mu_grid, int fit_stride = 1);

struct SweepPoint {
  double C = 0.0;
  double sup_residual = 0.0;    // +inf when the condition is unsatisfiable
  bool all_unphysical = false;  // required sqrt(I) <= 0 across the interval
};

/// For each C: fix E from the interval midpoint and take the supremum of
/// |energy_residual| over [rho_lo, rho_hi] on an n_rho grid.
std::vector<SweepPoint> residual_sweep(double mu0, std::span<const double> C_values, double rho_lo,
                                       double rho_hi, int n_rho);

}  // namespace saari
