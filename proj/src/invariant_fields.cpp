#include "saari/invariant_fields.hpp"

#include <cmath>
#include <stdexcept>

namespace saari {

namespace {

// Shared pieces of mu = m * S with m = sqrt(1/2 + (2/3)(x^2+y^2)) and
// S = 1 + 1/r1 + 1/r2.
struct FieldParts {
  double m, s;
  double p1, p2;        // x -/+ 1/2
  double r1, r2;
  double r1_3, r2_3;    // r^3
};

FieldParts field_parts(const ShapePoint& z) {
  FieldParts f;
  f.m = mu3_from_zeta(z);
  f.p1 = z.x - 0.5;
  f.p2 = z.x + 0.5;
  f.r1 = std::hypot(f.p1, z.y);
  f.r2 = std::hypot(f.p2, z.y);
  if (f.r1 < kCollisionEps || f.r2 < kCollisionEps)
    throw std::domain_error(f.r1 < kCollisionEps ? "collision between bodies 2 and 3"
                                                 : "collision between bodies 3 and 1");
  f.r1_3 = f.r1 * f.r1 * f.r1;
  f.r2_3 = f.r2 * f.r2 * f.r2;
  f.s = 1.0 + 1.0 / f.r1 + 1.0 / f.r2;
  return f;
}

}  // namespace

double mu_field(const ShapePoint& shape) {
  const FieldParts f = field_parts(shape);
  return f.m * f.s;
}

Vec2 mu_gradient(const ShapePoint& shape) {
  const FieldParts f = field_parts(shape);
  const double mx = (2.0 / 3.0) * shape.x / f.m;
  const double my = (2.0 / 3.0) * shape.y / f.m;
  const double sx = -f.p1 / f.r1_3 - f.p2 / f.r2_3;
  const double sy = -shape.y / f.r1_3 - shape.y / f.r2_3;
  return {mx * f.s + f.m * sx, my * f.s + f.m * sy};
}

Eigen::Matrix2d mu_hessian(const ShapePoint& shape) {
  const FieldParts f = field_parts(shape);
  const double x = shape.x, y = shape.y;
  const double m3 = f.m * f.m * f.m;
  const double mx = (2.0 / 3.0) * x / f.m;
  const double my = (2.0 / 3.0) * y / f.m;
  const double mxx = 2.0 / (3.0 * f.m) - 4.0 * x * x / (9.0 * m3);
  const double myy = 2.0 / (3.0 * f.m) - 4.0 * y * y / (9.0 * m3);
  const double mxy = -4.0 * x * y / (9.0 * m3);

  const double r1_5 = f.r1_3 * f.r1 * f.r1;
  const double r2_5 = f.r2_3 * f.r2 * f.r2;
  const double sx = -f.p1 / f.r1_3 - f.p2 / f.r2_3;
  const double sy = -y / f.r1_3 - y / f.r2_3;
  const double sxx = -1.0 / f.r1_3 + 3.0 * f.p1 * f.p1 / r1_5 - 1.0 / f.r2_3 + 3.0 * f.p2 * f.p2 / r2_5;
  const double syy = -1.0 / f.r1_3 + 3.0 * y * y / r1_5 - 1.0 / f.r2_3 + 3.0 * y * y / r2_5;
  const double sxy = 3.0 * f.p1 * y / r1_5 + 3.0 * f.p2 * y / r2_5;

  Eigen::Matrix2d h;
  h(0, 0) = mxx * f.s + 2.0 * mx * sx + f.m * sxx;
  h(1, 1) = myy * f.s + 2.0 * my * sy + f.m * syy;
  h(0, 1) = h(1, 0) = mxy * f.s + mx * sy + my * sx + f.m * sxy;
  return h;
}

double rho_field(const ShapePoint& shape) {
  const FieldParts f = field_parts(shape);
  return f.m * f.m * f.m / (f.r1 * f.r2);
}

Vec2 rho_gradient(const ShapePoint& shape) {
  const FieldParts f = field_parts(shape);
  const double rho = f.m * f.m * f.m / (f.r1 * f.r2);
  const double m2 = f.m * f.m;
  const double lx = 2.0 * shape.x / m2 - f.p1 / (f.r1 * f.r1) - f.p2 / (f.r2 * f.r2);
  const double ly = 2.0 * shape.y / m2 - shape.y / (f.r1 * f.r1) - shape.y / (f.r2 * f.r2);
  return {rho * lx, rho * ly};
}

double metric_factor(const ShapePoint& shape) {
  const double d = 1.0 + (4.0 / 3.0) * shape.norm_sq();
  return 0.75 * d * d;
}

double grad_norm_sq_xy(const ShapePoint& shape) {
  return metric_factor(shape) * mu_gradient(shape).squaredNorm();
}

double laplacian_xy(const ShapePoint& shape) {
  return metric_factor(shape) * mu_hessian(shape).trace();
}

double lambda_xy(const ShapePoint& shape) {
  // 4th-order central stencil for the gradient of |grad mu|^2; the step
  // shrinks near the collision points so the stencil stays inside the
  // singularity's own length scale
  const auto [r1, r2] = shape_ratios(shape);
  const double h = 1e-4 * std::max(1.0, std::sqrt(shape.norm_sq())) *
                   std::min(1.0, 10.0 * std::min(r1, r2));
  auto g = [&](double x, double y) { return grad_norm_sq_xy({x, y}); };
  const double gx = (g(shape.x - 2 * h, shape.y) - 8.0 * g(shape.x - h, shape.y) +
                     8.0 * g(shape.x + h, shape.y) - g(shape.x + 2 * h, shape.y)) /
                    (12.0 * h);
  const double gy = (g(shape.x, shape.y - 2 * h) - 8.0 * g(shape.x, shape.y - h) +
                     8.0 * g(shape.x, shape.y + h) - g(shape.x, shape.y + 2 * h)) /
                    (12.0 * h);
  return metric_factor(shape) * mu_gradient(shape).dot(Vec2(gx, gy));
}

double d_operator(const ShapePoint& shape, const Vec2& phi_gradient) {
  const Vec2 g = mu_gradient(shape);
  return metric_factor(shape) * (g.x() * phi_gradient.y() - g.y() * phi_gradient.x());
}

InvariantFieldValues invariant_fields_xy(const ShapePoint& shape) {
  InvariantFieldValues out;
  out.grad_norm_sq = grad_norm_sq_xy(shape);
  out.laplacian = laplacian_xy(shape);
  out.lambda = lambda_xy(shape);
  const double d_rho = d_operator(shape, rho_gradient(shape));
  out.d_rho_sq = d_rho * d_rho;
  out.nu = symmetric_invariants(mu_parts(shape)).nu;
  return out;
}

InvariantFieldValues closed_forms(double mu, double rho) {
  if (2.0 * mu * rho + 3.0 * rho * rho < 0.0)
    throw std::domain_error("closed_forms: 2*mu*rho + 3*rho^2 < 0");
  InvariantFieldValues out;
  out.grad_norm_sq = grad_norm_sq_closed(mu, rho);
  out.laplacian = laplacian_closed(mu, rho);
  out.lambda = lambda_closed(mu, rho);
  out.d_rho_sq = d_rho_sq_closed(mu, rho);
  out.nu = nu_closed(mu, rho);
  return out;
}

InvariantFieldValues closed_forms(const SymmetricInvariants& inv) {
  return closed_forms(inv.mu, inv.rho);
}

}  // namespace saari
