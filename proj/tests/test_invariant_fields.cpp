#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "saari/conjecture.hpp"
#include "saari/invariant_fields.hpp"
#include "saari/sampling.hpp"

using namespace saari;

namespace {

const ShapePoint kLagrange{0.0, std::numbers::sqrt3 / 2.0};
const ShapePoint kEuler{0.0, 0.0};
const double kMuEuler = 5.0 / std::numbers::sqrt2;

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

InvariantFieldValues closed_at(const ShapePoint& z) {
  return closed_forms(symmetric_invariants(mu_parts(z)));
}

}  // namespace

TEST_CASE("mu_field at reference points") {
  CHECK(mu_field(kLagrange) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(mu_field(kEuler) == doctest::Approx(kMuEuler).epsilon(1e-14));
  // permutation image of the Euler point
  CHECK(std::abs(mu_field({1.5, 0.0}) - mu_field(kEuler)) < 1e-14);
  CHECK_THROWS_AS(mu_field({0.5, 0.0}), std::domain_error);
}

TEST_CASE("mu_field agrees with the symmetric-function route") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 1000; ++it) {
    const ShapePoint z = sample_shape(rng);
    const double direct = mu_field(z);
    const double via_parts = symmetric_invariants(mu_parts(z)).mu;
    CHECK(std::abs(direct - via_parts) <= 1e-12 * std::abs(direct));
  }
}

TEST_CASE("mu_gradient vanishes at the central configurations") {
  for (const ShapePoint z : {kLagrange, ShapePoint{0.0, -std::numbers::sqrt3 / 2.0}, kEuler,
                             ShapePoint{1.5, 0.0}, ShapePoint{-1.5, 0.0}}) {
    CHECK(mu_gradient(z).norm() < 1e-13);
  }
}

TEST_CASE("mu_gradient matches central finite differences") {
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (int it = 0; it < 200; ++it) {
    const ShapePoint z = sample_shape(rng);
    const Vec2 g = mu_gradient(z);
    if (g.norm() < 1e-3) continue;
    const Vec2 fd((mu_field({z.x + h, z.y}) - mu_field({z.x - h, z.y})) / (2 * h),
                  (mu_field({z.x, z.y + h}) - mu_field({z.x, z.y - h})) / (2 * h));
    CHECK((g - fd).norm() <= 1e-6 * g.norm());
  }
  // spot value with a tighter budget
  const ShapePoint z{0.3, 0.4};
  const Vec2 g = mu_gradient(z);
  const Vec2 fd((mu_field({z.x + h, z.y}) - mu_field({z.x - h, z.y})) / (2 * h),
                (mu_field({z.x, z.y + h}) - mu_field({z.x, z.y - h})) / (2 * h));
  CHECK((g - fd).norm() <= 1e-8 * g.norm());
}

TEST_CASE("laplacian_xy at the central configurations") {
  CHECK(std::abs(laplacian_xy(kLagrange) - 9.0) < 1e-10);
  CHECK(std::abs(laplacian_xy(kEuler) - 11.0 * std::numbers::sqrt2) < 1e-10);
}

TEST_CASE("laplacian_xy matches a 5-point finite-difference Laplacian") {
  std::mt19937_64 rng(13);
  const double h = 1e-4;
  for (int it = 0; it < 200; ++it) {
    const ShapePoint z = sample_shape(rng);
    const auto [r1, r2] = shape_ratios(z);
    if (std::min(r1, r2) < 0.05) continue;  // keep the stencil well-conditioned
    const double flat =
        (mu_field({z.x + h, z.y}) + mu_field({z.x - h, z.y}) + mu_field({z.x, z.y + h}) +
         mu_field({z.x, z.y - h}) - 4.0 * mu_field(z)) /
        (h * h);
    const double fd = metric_factor(z) * flat;
    CHECK(rel_diff(laplacian_xy(z), fd) <= 1e-5);
  }
}

TEST_CASE("lambda_xy vanishes at critical points and matches the closed form") {
  CHECK(std::abs(lambda_xy(kLagrange)) < 1e-10);
  CHECK(std::abs(lambda_xy(kEuler)) < 1e-10);

  const ShapePoint z{0.3, 0.4};
  CHECK(rel_diff(lambda_xy(z), lambda_closed(mu_field(z), rho_field(z))) <= 1e-6);
}

TEST_CASE("d_operator: antisymmetry and collinear vanishing") {
  const ShapePoint z{0.3, 0.4};
  CHECK(d_operator(z, mu_gradient(z)) == doctest::Approx(0.0).epsilon(1e-14));

  // on the collinear axis both gradients point along x
  const ShapePoint axis{0.17, 0.0};
  CHECK(std::abs(d_operator(axis, rho_gradient(axis))) < 1e-12);

  const double d_rho = d_operator(z, rho_gradient(z));
  CHECK(rel_diff(d_rho * d_rho, d_rho_sq_closed(mu_field(z), rho_field(z))) <= 1e-6);
}

TEST_CASE("closed_forms at the Lagrange values (3, 1)") {
  const InvariantFieldValues v = closed_forms(3.0, 1.0);
  CHECK(std::abs(v.grad_norm_sq) < 1e-12);
  CHECK(v.laplacian == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(std::abs(v.lambda) < 1e-10);
  CHECK(std::abs(v.d_rho_sq) < 1e-10);
  CHECK(v.nu == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("closed_forms at the Euler values (5/sqrt(2), sqrt(2))") {
  const InvariantFieldValues v = closed_forms(kMuEuler, std::numbers::sqrt2);
  CHECK(std::abs(v.grad_norm_sq) < 1e-10);
  CHECK(v.laplacian == doctest::Approx(11.0 * std::numbers::sqrt2).epsilon(1e-12));
  CHECK(std::abs(v.lambda) < 1e-9);
  CHECK(std::abs(v.d_rho_sq) < 1e-9);
  CHECK(v.nu == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("closed_forms rejects points outside the evaluation domain") {
  // 2 mu rho + 3 rho^2 = -3 < 0 at (3, -1)
  CHECK_THROWS_AS(closed_forms(3.0, -1.0), std::domain_error);
}

TEST_CASE("cross-route equivalence of all four fields on random shapes") {
  std::mt19937_64 rng(19);
  int tested = 0;
  while (tested < 1000) {
    const ShapePoint z = sample_shape(rng);
    const auto [r1, r2] = shape_ratios(z);
    if (std::min(r1, r2) < 0.05) continue;
    ++tested;
    const InvariantFieldValues xy = invariant_fields_xy(z);
    const InvariantFieldValues cf = closed_at(z);
    CHECK(rel_diff(xy.grad_norm_sq, cf.grad_norm_sq) <= 1e-6);
    CHECK(rel_diff(xy.laplacian, cf.laplacian) <= 1e-6);
    CHECK(rel_diff(xy.lambda, cf.lambda) <= 1e-6);
    CHECK(rel_diff(xy.d_rho_sq, cf.d_rho_sq) <= 1e-6);
    CHECK(rel_diff(xy.nu, cf.nu) <= 1e-10);
    CHECK(xy.grad_norm_sq >= 0.0);
    CHECK(xy.d_rho_sq >= 0.0);
    CHECK(cf.d_rho_sq >= -1e-10 * std::max(1.0, std::abs(cf.d_rho_sq)));
  }
}

TEST_CASE("all field values are invariant under the symmetry maps") {
  std::mt19937_64 rng(43);
  int tested = 0;
  while (tested < 300) {
    const ShapePoint z = sample_shape(rng);
    if (std::hypot(z.x - 0.5, z.y) < 1e-2) continue;
    const auto [r1, r2] = shape_ratios(z);
    if (std::min(r1, r2) < 0.05) continue;
    ++tested;
    const InvariantFieldValues a = invariant_fields_xy(z);
    for (const ShapePoint w : {cyclic_shape_map(z), reflect_shape_map(z)}) {
      const InvariantFieldValues b = invariant_fields_xy(w);
      CHECK(rel_diff(a.grad_norm_sq, b.grad_norm_sq) <= 1e-10);
      CHECK(rel_diff(a.laplacian, b.laplacian) <= 1e-10);
      CHECK(rel_diff(a.lambda, b.lambda) <= 1e-8);
      CHECK(rel_diff(a.d_rho_sq, b.d_rho_sq) <= 1e-8);
    }
  }
}

TEST_CASE("collinear shapes have vanishing (D rho)^2") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int it = 0; it < 200; ++it) {
    const double x = u(rng);
    if (std::abs(x - 0.5) < 0.05 || std::abs(x + 0.5) < 0.05) continue;
    const ShapePoint z{x, 0.0};
    CHECK(invariant_fields_xy(z).d_rho_sq < 1e-10);
  }
}

TEST_CASE("mu attains its minimum 3 and rho its minimum 1 only at the Lagrange points") {
  // dense scan over the disk, then Newton refinement of the best cell
  double mu_min = 1e300, rho_min = 1e300;
  ShapePoint mu_arg{}, rho_arg{};
  const int n = 481;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ShapePoint z{-3.0 + 6.0 * i / (n - 1), -3.0 + 6.0 * j / (n - 1)};
      if (std::hypot(z.x - 0.5, z.y) < 1e-3 || std::hypot(z.x + 0.5, z.y) < 1e-3) continue;
      const double m = mu_field(z);
      const double r = rho_field(z);
      if (m < mu_min) {
        mu_min = m;
        mu_arg = z;
      }
      if (r < rho_min) {
        rho_min = r;
        rho_arg = z;
      }
    }
  }
  CHECK(mu_min >= 3.0 - 1e-12);
  CHECK(rho_min >= 1.0 - 1e-12);

  const ShapePoint mu_star = refine_critical_point(mu_arg);
  CHECK(std::abs(mu_star.x) < 1e-10);
  CHECK(std::abs(std::abs(mu_star.y) - std::numbers::sqrt3 / 2.0) < 1e-10);
  CHECK(mu_field(mu_star) == doctest::Approx(3.0).epsilon(1e-13));

  const ShapePoint rho_star = refine_critical_point(rho_arg);
  CHECK(std::abs(rho_star.x) < 1e-10);
  CHECK(std::abs(std::abs(rho_star.y) - std::numbers::sqrt3 / 2.0) < 1e-10);
  CHECK(rho_field(rho_star) == doctest::Approx(1.0).epsilon(1e-13));
}
