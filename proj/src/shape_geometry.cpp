#include "saari/shape_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace saari {

namespace {

[[noreturn]] void throw_collision(int i, int j, double r) {
  throw std::domain_error("collision between bodies " + std::to_string(i) + " and " +
                          std::to_string(j) + " (r = " + std::to_string(r) + ")");
}

Complex to_complex(const Vec2& v) { return {v.x(), v.y()}; }

}  // namespace

double PlanarConfig::min_pair_distance() const {
  return std::min({pair_distance(0, 1), pair_distance(1, 2), pair_distance(2, 0)});
}

std::pair<ShapePoint, SizeOrientation> reduce_configuration(const PlanarConfig& config) {
  const Complex q1 = to_complex(config.q[0]);
  const Complex q2 = to_complex(config.q[1]);
  const Complex q3 = to_complex(config.q[2]);

  const Complex base = q2 - q1;
  if (std::abs(base) < kCollisionEps)
    throw std::domain_error("shape coordinate singular: bodies 1 and 2 coincide");

  const double I = config.moment_of_inertia();
  if (I < kCollisionEps * kCollisionEps) throw std::domain_error("total collapse: I = 0");

  const Complex zeta = 1.5 * q3 / base;
  double theta = std::arg(base);
  if (theta <= -M_PI) theta = M_PI;  // keep theta in (-pi, pi]
  return {ShapePoint::from(zeta), SizeOrientation{I, theta}};
}

PlanarConfig reconstruct_configuration(const ShapePoint& shape, const SizeOrientation& size_orient) {
  if (!(size_orient.I > 0.0)) throw std::domain_error("reconstruct_configuration: I must be positive");

  const Complex zeta = shape.zeta();
  const std::array<Complex, 3> xi = {-0.5 - zeta / 3.0, 0.5 - zeta / 3.0, 2.0 * zeta / 3.0};
  const double norm_sq = std::norm(xi[0]) + std::norm(xi[1]) + std::norm(xi[2]);
  const Complex scale =
      std::sqrt(size_orient.I) * std::exp(Complex(0.0, size_orient.theta)) / std::sqrt(norm_sq);

  PlanarConfig out;
  for (int k = 0; k < 3; ++k) {
    const Complex qk = scale * xi[k];
    out.q[k] = Vec2(qk.real(), qk.imag());
    out.v[k].setZero();
  }
  return out;
}

std::pair<double, double> shape_ratios(const ShapePoint& shape) {
  const double r1 = std::hypot(shape.x - 0.5, shape.y);
  const double r2 = std::hypot(shape.x + 0.5, shape.y);
  return {r1, r2};
}

double mu3_from_zeta(const ShapePoint& shape) {
  return std::sqrt(0.5 + (2.0 / 3.0) * shape.norm_sq());
}

double mu3_from_ratios(double r1, double r2) {
  return std::sqrt((1.0 + r1 * r1 + r2 * r2) / 3.0);
}

MuParts mu_parts(const ShapePoint& shape) {
  const auto [r1, r2] = shape_ratios(shape);
  if (r1 < kCollisionEps) throw_collision(2, 3, r1);
  if (r2 < kCollisionEps) throw_collision(3, 1, r2);
  const double m3 = mu3_from_zeta(shape);
  return {m3 / r1, m3 / r2, m3};
}

SymmetricInvariants symmetric_invariants(const MuParts& parts) {
  const double mu = parts.mu1 + parts.mu2 + parts.mu3;
  const double nu = parts.mu1 * parts.mu2 + parts.mu2 * parts.mu3 + parts.mu3 * parts.mu1;
  const double rho = parts.mu1 * parts.mu2 * parts.mu3;
  return {mu, nu, rho};
}

ShapePoint cyclic_shape_map(const ShapePoint& shape) {
  const Complex zeta = shape.zeta();
  const Complex den = 0.5 - zeta;
  if (std::abs(den) < kMapPoleEps) throw std::domain_error("map pole: zeta = 1/2");
  return ShapePoint::from(0.5 * (1.5 + zeta) / den);
}

Complex cyclic_map_derivative(const ShapePoint& shape) {
  const Complex den = 0.5 - shape.zeta();
  if (std::abs(den) < kMapPoleEps) throw std::domain_error("map pole: zeta = 1/2");
  return 1.0 / (den * den);
}

ShapePoint reflect_shape_map(const ShapePoint& shape) { return {-shape.x, -shape.y}; }

double shape_metric_speed(const ShapePoint& shape, const Vec2& dshape) {
  const double den = 1.0 + (4.0 / 3.0) * shape.norm_sq();
  return (4.0 / 3.0) * dshape.squaredNorm() / (den * den);
}

double collinearity_indicator(const ShapePoint& shape) {
  const auto [r1, r2] = shape_ratios(shape);
  const double s1 = r1 * r1, s2 = r2 * r2;
  return 2.0 * (s1 + s2) - (s1 - s2) * (s1 - s2) - 1.0;
}

}  // namespace saari
