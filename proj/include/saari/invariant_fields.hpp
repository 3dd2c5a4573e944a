#pragma once

#include <Eigen/Core>

#include <cmath>

#include "saari/shape_geometry.hpp"

namespace saari {

/// The permutation-invariant fields at a shape point.  grad_norm_sq,
/// laplacian and lambda use the shape-sphere metric; d_rho_sq is the
/// squared antisymmetric derivative of rho along the mu level direction.
struct InvariantFieldValues {
  double grad_norm_sq = 0.0;
  double laplacian = 0.0;
  double lambda = 0.0;
  double d_rho_sq = 0.0;
  double nu = 0.0;
};

/// Configurational measure mu = sqrt(1/2 + (2/3)|zeta|^2) (1 + 1/r1 + 1/r2).
double mu_field(const ShapePoint& shape);

/// Analytic flat partials (d mu/dx, d mu/dy).
Vec2 mu_gradient(const ShapePoint& shape);

/// Analytic flat second partials of mu.
Eigen::Matrix2d mu_hessian(const ShapePoint& shape);

/// rho = mu1 mu2 mu3 as a field on the shape plane.
double rho_field(const ShapePoint& shape);

/// Analytic flat partials of rho.
Vec2 rho_gradient(const ShapePoint& shape);

/// Conformal factor (3/4)(1 + (4/3)|zeta|^2)^2 that raises flat indices on
/// the shape sphere.
double metric_factor(const ShapePoint& shape);

/// |grad mu|^2 with the shape-sphere metric, from analytic partials.
double grad_norm_sq_xy(const ShapePoint& shape);

/// Laplace-Beltrami of mu: (3/4)(1 + (4/3)|zeta|^2)^2 (mu_xx + mu_yy).
double laplacian_xy(const ShapePoint& shape);

/// lambda = g^{ij} (d_i mu)(d_j |grad mu|^2); the gradient of |grad mu|^2 is
/// taken by central differences so the route stays free of third
/// derivatives of mu.
double lambda_xy(const ShapePoint& shape);

/// D phi = (3/4)(1 + (4/3)|zeta|^2)^2 (grad mu ^ grad phi) for a caller-
/// supplied flat gradient of phi.  Antisymmetric; D mu = 0.
double d_operator(const ShapePoint& shape, const Vec2& phi_gradient);

/// All four invariants via the (x, y) route, plus nu.
InvariantFieldValues invariant_fields_xy(const ShapePoint& shape);

// ---------------------------------------------------------------------------
// Closed forms in the manifestly invariant variables (mu, rho).  They are
// evaluated as written for any mu > 0 and 2*mu*rho + 3*rho^2 >= 0, which
// includes the unphysical small-rho region used by the series expansion.
// Scalar-generic so they can be differentiated by complex step.
// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar nu_closed(Scalar mu, Scalar rho) {
  using std::sqrt;
  return sqrt(2.0 * mu * rho + 3.0 * rho * rho);
}

template <typename Scalar>
Scalar grad_norm_sq_closed(Scalar mu, Scalar rho) {
  const Scalar s = nu_closed(mu, rho);
  const Scalar mu2 = mu * mu;
  return -mu2 + 2.0 * mu2 * mu2 + 6.0 * mu * rho - 9.0 * rho * rho -
         3.0 * (2.0 * mu2 - mu * rho + 3.0 * rho * rho) * s;
}

template <typename Scalar>
Scalar laplacian_closed(Scalar mu, Scalar rho) {
  return mu + 2.0 * mu * mu * mu + 6.0 * rho - 6.0 * mu * nu_closed(mu, rho);
}

template <typename Scalar>
Scalar lambda_closed(Scalar mu, Scalar rho) {
  const Scalar s = nu_closed(mu, rho);
  const Scalar m2 = mu * mu, m3 = m2 * mu, m4 = m2 * m2, m5 = m4 * mu, m7 = m5 * m2;
  const Scalar r2 = rho * rho, r3 = r2 * rho, r4 = r2 * r2, r5 = r4 * rho;
  const Scalar p = 4.0 * m3 - 24.0 * m5 + 32.0 * m7 - 72.0 * m2 * rho + 660.0 * m4 * rho +
                   324.0 * mu * r2 + 36.0 * m3 * r2 - 432.0 * r3 + 891.0 * m2 * r3 +
                   2349.0 * mu * r4 - 243.0 * r5;
  const Scalar q = 24.0 * m3 - 60.0 * m5 - 156.0 * m2 * rho + 28.0 * m4 * rho + 324.0 * mu * r2 -
                   93.0 * m3 * r2 - 216.0 * r3 - 27.0 * m2 * r3 + 81.0 * mu * r4;
  return 0.5 * (p + 3.0 * q * s);
}

template <typename Scalar>
Scalar d_rho_sq_closed(Scalar mu, Scalar rho) {
  const Scalar s = nu_closed(mu, rho);
  const Scalar m2 = mu * mu, m3 = m2 * mu, m4 = m2 * m2;
  const Scalar r2 = rho * rho, r3 = r2 * rho;
  const Scalar a = -(2.0 * mu + 3.0 * rho) *
                   (4.0 * m4 + 134.0 * mu * rho - 12.0 * m3 * rho - 177.0 * r2 + 9.0 * m2 * r2);
  const Scalar b = 2.0 * (28.0 * m3 + 108.0 * rho - 36.0 * m2 * rho - 45.0 * mu * r2 + 54.0 * r3) * s;
  return r2 * (2.0 * mu + 3.0 * rho) / 4.0 * (a + b);
}

/// All four invariants via the closed forms.  Throws std::domain_error when
/// 2*mu*rho + 3*rho^2 < 0 (outside the closure of the evaluation domain).
InvariantFieldValues closed_forms(double mu, double rho);
InvariantFieldValues closed_forms(const SymmetricInvariants& inv);

}  // namespace saari
