#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "saari/dynamics.hpp"
#include "saari/invariant_fields.hpp"
#include "saari/sampling.hpp"
#include "test_helpers.hpp"

using namespace saari;
using saari::testing::random_config;

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v)
    if (!std::isnan(x)) m = std::max(m, std::abs(x));
  return m;
}

double max_norm(const std::vector<Vec2>& v) {
  double m = 0.0;
  for (const Vec2& x : v)
    if (!std::isnan(x.x())) m = std::max(m, x.norm());
  return m;
}

Trajectory strided(const Trajectory& traj, int k) {
  Trajectory out;
  out.dt_sample = traj.dt_sample * k;
  for (size_t i = 0; i < traj.samples.size(); i += k) out.samples.push_back(traj.samples[i]);
  return out;
}

}  // namespace

TEST_CASE("newton_acceleration: unit equilateral accelerates toward the centroid at sqrt(3)") {
  const PlanarConfig c = fixture_orbit("equilateral_freefall").config;
  const auto a = newton_acceleration(c);
  for (int k = 0; k < 3; ++k) {
    CHECK(a[k].norm() == doctest::Approx(std::numbers::sqrt3).epsilon(1e-13));
    // direction: toward the origin (centroid)
    const Vec2 dir = -c.q[k].normalized();
    CHECK((a[k].normalized() - dir).norm() < 1e-13);
  }
}

TEST_CASE("newton_acceleration: middle body of a symmetric collinear config is force-free") {
  PlanarConfig c;
  c.q[0] = Vec2(-0.7, 0.0);
  c.q[1] = Vec2(0.7, 0.0);
  c.q[2] = Vec2(0.0, 0.0);
  const auto a = newton_acceleration(c);
  CHECK(a[2].norm() < 1e-15);
}

TEST_CASE("newton_acceleration: third law on random configs") {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 100; ++it) {
    const auto a = newton_acceleration(random_config(rng));
    CHECK((a[0] + a[1] + a[2]).norm() < 1e-14);
  }
}

TEST_CASE("conserved_quantities at the fixtures") {
  const Fixture lag = fixture_orbit("lagrange_circular");
  const auto [e1, c1] = conserved_quantities(lag.config);
  CHECK(e1 == doctest::Approx(-1.5).epsilon(1e-13));
  CHECK(c1 == doctest::Approx(std::numbers::sqrt3).epsilon(1e-13));

  const auto [e2, c2] = conserved_quantities(fixture_orbit("equilateral_freefall").config);
  CHECK(e2 == doctest::Approx(-3.0).epsilon(1e-13));
  CHECK(std::abs(c2) < 1e-14);

  PlanarConfig flipped = lag.config;
  for (auto& v : flipped.v) v = -v;
  const auto [e3, c3] = conserved_quantities(flipped);
  CHECK(e3 == doctest::Approx(e1).epsilon(1e-14));
  CHECK(c3 == doctest::Approx(-c1).epsilon(1e-14));
}

TEST_CASE("conserved_quantities agrees with the reduced-variable expressions") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    const PlanarConfig c = random_config(rng);
    const auto [e, ang] = conserved_quantities(c);
    const auto [er, cr] = reduced_conserved_quantities(c);
    CHECK(std::abs(e - er) <= 1e-10 * std::max(1.0, std::abs(e)));
    CHECK(std::abs(ang - cr) <= 1e-10 * std::max(1.0, std::abs(ang)));
  }
}

TEST_CASE("integrate_cartesian: Lagrange circular fixture stays rigid over [0, 10]") {
  const Fixture fx = fixture_orbit("lagrange_circular");
  IntegratorConfig cfg;
  cfg.t_span = 10.0;
  const Trajectory traj = integrate_cartesian(fx.config, cfg);
  REQUIRE(!traj.collision_abort);
  REQUIRE(traj.samples.size() == 10001);

  const double omega = std::numbers::sqrt3;
  double mu_err = 0.0, i_err = 0.0, e_err = 0.0, c_err = 0.0, pos_err = 0.0, com_err = 0.0,
         mom_err = 0.0;
  for (const auto& p : traj.samples) {
    mu_err = std::max(mu_err, std::abs(mu_field(p.shape) - 3.0));
    i_err = std::max(i_err, std::abs(p.I - 1.0));
    e_err = std::max(e_err, std::abs(p.E + 1.5));
    c_err = std::max(c_err, std::abs(p.C - omega));
    com_err = std::max(com_err, p.config.center_of_mass().norm());
    mom_err = std::max(mom_err, p.config.total_momentum().norm());
    // closed-form rigid rotation
    Eigen::Matrix2d rot;
    rot << std::cos(omega * p.t), -std::sin(omega * p.t), std::sin(omega * p.t),
        std::cos(omega * p.t);
    for (int k = 0; k < 3; ++k)
      pos_err = std::max(pos_err, (p.config.q[k] - rot * fx.config.q[k]).norm());
  }
  CHECK(mu_err <= 1e-8);
  CHECK(i_err <= 1e-8);
  CHECK(e_err <= 1e-9);
  CHECK(c_err <= 1e-9);
  CHECK(pos_err <= 1e-7);
  CHECK(com_err <= 1e-12);
  CHECK(mom_err <= 1e-12);
}

TEST_CASE("integrate_cartesian: zero-velocity equilateral start collapses homothetically") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  cfg.rel_tol = cfg.abs_tol = 1e-12;
  const Trajectory traj = integrate_cartesian(fixture_orbit("equilateral_freefall").config, cfg);
  CHECK(traj.collision_abort);

  const Complex zeta0 = traj.samples.front().shape.zeta();
  CHECK(std::abs(zeta0 - Complex(0.0, std::numbers::sqrt3 / 2.0)) < 1e-14);
  double drift = 0.0;
  for (const auto& p : traj.samples) drift = std::max(drift, std::abs(p.shape.zeta() - zeta0));
  CHECK(drift <= 1e-8);
  // collapse happens at finite time, before the requested span
  CHECK(traj.samples.back().t < 1.0);
  CHECK(traj.samples.back().config.min_pair_distance() < 1e-3);
}

TEST_CASE("integrate_cartesian: E and C drift within 10x rel_tol on a generic orbit") {
  const Fixture fx = fixture_orbit("generic_perturbed");
  IntegratorConfig cfg;
  cfg.t_span = 10.0;
  cfg.rel_tol = cfg.abs_tol = 1e-10;
  const Trajectory traj = integrate_cartesian(fx.config, cfg);
  for (const auto& p : traj.samples) {
    CHECK(std::abs(p.E - fx.E) <= 10.0 * cfg.rel_tol * std::abs(fx.E));
    CHECK(std::abs(p.C - fx.C) <= 10.0 * cfg.rel_tol * std::abs(fx.C));
  }
}

TEST_CASE("integrate_cartesian: rejects a start inside the collision threshold") {
  PlanarConfig c;
  c.q[0] = Vec2(-1e-8, 0.0);
  c.q[1] = Vec2(1e-8, 0.0);
  c.q[2] = Vec2(0.0, 1e-8);
  c.recenter();
  IntegratorConfig cfg;
  CHECK_THROWS_AS(integrate_cartesian(c, cfg), std::invalid_argument);
}

TEST_CASE("scale covariance: q -> lam q, t -> lam^{3/2} t maps solutions to solutions") {
  const double lam = 1.7;
  const Fixture fx = fixture_orbit("generic_perturbed");

  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  cfg.rel_tol = cfg.abs_tol = 1e-12;
  const Trajectory base = integrate_cartesian(fx.config, cfg);

  PlanarConfig scaled = fx.config;
  for (auto& q : scaled.q) q *= lam;
  for (auto& v : scaled.v) v /= std::sqrt(lam);
  IntegratorConfig cfg2 = cfg;
  const double tfac = std::pow(lam, 1.5);
  cfg2.t_span = cfg.t_span * tfac;
  cfg2.dt_sample = cfg.dt_sample * tfac;
  const Trajectory img = integrate_cartesian(scaled, cfg2);

  REQUIRE(base.samples.size() == img.samples.size());
  double err = 0.0;
  for (size_t i = 0; i < base.samples.size(); ++i)
    for (int k = 0; k < 3; ++k)
      err = std::max(err, (img.samples[i].config.q[k] - lam * base.samples[i].config.q[k]).norm());
  CHECK(err <= 1e-8);
}

TEST_CASE("lagrange_jacobi_residual vanishes on the Lagrange fixture") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  const Trajectory traj = integrate_cartesian(fixture_orbit("lagrange_circular").config, cfg);
  CHECK(max_abs(lagrange_jacobi_residual(traj)) <= 1e-6);
}

TEST_CASE("lagrange_jacobi_residual: small and second order on a generic orbit") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  const Trajectory traj = integrate_cartesian(fixture_orbit("generic_perturbed").config, cfg);

  const double r1 = max_abs(lagrange_jacobi_residual(traj));
  CHECK(r1 <= 1e-5);
  const double r2 = max_abs(lagrange_jacobi_residual(strided(traj, 2)));
  const double r4 = max_abs(lagrange_jacobi_residual(strided(traj, 4)));
  // halving dt divides an O(dt^2) residual by ~4
  CHECK(r2 / r1 >= 3.0);
  CHECK(r2 / r1 <= 5.0);
  CHECK(r4 / r2 >= 3.0);
  CHECK(r4 / r2 <= 5.0);
}

TEST_CASE("lagrange_jacobi_residual needs at least three samples") {
  Trajectory t;
  t.samples.resize(2);
  CHECK_THROWS_AS(lagrange_jacobi_residual(t), std::invalid_argument);
}

TEST_CASE("reparametrize_time on frozen-shape trajectories") {
  auto synthetic = [&](const ShapePoint& z, double I, int n, double dt) {
    Trajectory traj;
    traj.dt_sample = dt;
    for (int i = 0; i < n; ++i) {
      TrajectorySample p;
      p.t = i * dt;
      p.shape = z;
      p.I = I;
      traj.samples.push_back(p);
    }
    return traj;
  };
  // zeta = 0: ds/dt = 1/2
  const auto s1 = reparametrize_time(synthetic({0.0, 0.0}, 1.0, 11, 0.1));
  CHECK(s1.back() == doctest::Approx(0.5).epsilon(1e-14));
  // Lagrange shape: ds/dt = 1
  const auto s2 =
      reparametrize_time(synthetic({0.0, std::numbers::sqrt3 / 2.0}, 1.0, 11, 0.1));
  CHECK(s2.back() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("reparametrize_time converges at second order") {
  // I(t) = 1 + 0.1 sin t with frozen shape zeta = 0
  auto synthetic = [&](double dt, int n) {
    Trajectory traj;
    traj.dt_sample = dt;
    for (int i = 0; i < n; ++i) {
      TrajectorySample p;
      p.t = i * dt;
      p.shape = ShapePoint{0.0, 0.0};
      p.I = 1.0 + 0.1 * std::sin(p.t);
      traj.samples.push_back(p);
    }
    return traj;
  };
  const double s_h = reparametrize_time(synthetic(0.04, 51)).back();
  const double s_h2 = reparametrize_time(synthetic(0.02, 101)).back();
  const double s_h4 = reparametrize_time(synthetic(0.01, 201)).back();
  const double d1 = std::abs(s_h - s_h2);
  const double d2 = std::abs(s_h2 - s_h4);
  CHECK(d1 / d2 >= 3.5);
  CHECK(d1 / d2 <= 4.5);
}

TEST_CASE("saari_relation_residual: frozen shapes make both sides vanish") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  const Trajectory lag = integrate_cartesian(fixture_orbit("lagrange_circular").config, cfg);
  CHECK(max_abs(saari_relation_residual(lag)) <= 1e-8);

  IntegratorConfig cfg2;
  cfg2.t_span = 0.5;
  const Trajectory fall = integrate_cartesian(fixture_orbit("equilateral_freefall").config, cfg2);
  CHECK(max_abs(saari_relation_residual(fall)) <= 1e-8);
}

TEST_CASE("saari_relation_residual decays at second order on a generic orbit") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  const Trajectory traj = integrate_cartesian(fixture_orbit("generic_perturbed").config, cfg);
  const double r1 = max_abs(saari_relation_residual(traj));
  const double r2 = max_abs(saari_relation_residual(strided(traj, 2)));
  const double r4 = max_abs(saari_relation_residual(strided(traj, 4)));
  CHECK(r1 <= 1e-4);
  CHECK(r2 / r1 >= 3.0);
  CHECK(r4 / r2 >= 3.0);
  CHECK(r4 / r2 <= 5.5);
}

TEST_CASE("shape_eom_residual: central configurations give vanishing residuals") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  const Trajectory lag = integrate_cartesian(fixture_orbit("lagrange_circular").config, cfg);
  CHECK(max_norm(shape_eom_residual(lag)) <= 1e-8);
}

TEST_CASE("shape_eom_residual: small, second order, and tangent to the collinear manifold") {
  IntegratorConfig cfg;
  cfg.t_span = 2.0;
  const Trajectory traj = integrate_cartesian(fixture_orbit("generic_perturbed").config, cfg);
  const double r1 = max_norm(shape_eom_residual(traj));
  const double r2 = max_norm(shape_eom_residual(strided(traj, 2)));
  const double r4 = max_norm(shape_eom_residual(strided(traj, 4)));
  CHECK(r1 <= 1e-4);
  CHECK(r2 / r1 >= 3.0);
  CHECK(r4 / r2 >= 3.0);
  CHECK(r4 / r2 <= 5.5);

  // purely collinear initial data stay on y = 0; the y residual component
  // vanishes identically
  PlanarConfig collinear = fixture_orbit("euler_collinear_circular").config;
  collinear.v[0] = Vec2(-0.1, 0.0);
  collinear.v[1] = Vec2(0.1, 0.0);
  collinear.v[2] = Vec2(0.0, 0.0);
  IntegratorConfig cfg2;
  cfg2.t_span = 0.5;
  const Trajectory line = integrate_cartesian(collinear, cfg2);
  REQUIRE(!line.collision_abort);
  double y_res = 0.0;
  for (const Vec2& r : shape_eom_residual(line))
    if (!std::isnan(r.y())) y_res = std::max(y_res, std::abs(r.y()));
  CHECK(y_res <= 1e-10);
}

TEST_CASE("integrate_reduced: Lagrange shape with matching E, C is a fixed point") {
  const Fixture fx = fixture_orbit("lagrange_circular");
  const ReducedStart r = reduced_initial_data(fx.config);
  IntegratorConfig cfg;
  cfg.t_span = 5.0;
  const Trajectory traj =
      integrate_reduced(r.shape, r.dshape_ds, r.I, r.dI_dt, r.theta, r.E, r.C, cfg);
  double drift = 0.0, i_err = 0.0;
  for (const auto& p : traj.samples) {
    drift = std::max(drift, std::abs(p.shape.zeta() - r.shape.zeta()));
    i_err = std::max(i_err, std::abs(p.I - 1.0));
  }
  CHECK(drift <= 1e-8);
  CHECK(i_err <= 1e-8);
}

TEST_CASE("integrate_reduced agrees with the Cartesian reference on generic starts") {
  std::mt19937_64 rng(101);
  IntegratorConfig cfg;
  cfg.t_span = 5.0;
  for (int trial = 0; trial < 3; ++trial) {
    const PlanarConfig start = sample_orbit_start(rng, 0.05);
    const Trajectory cart = integrate_cartesian(start, cfg);
    if (cart.collision_abort) continue;

    const ReducedStart r = reduced_initial_data(start);
    const Trajectory red =
        integrate_reduced(r.shape, r.dshape_ds, r.I, r.dI_dt, r.theta, r.E, r.C, cfg);
    REQUIRE(red.samples.size() == cart.samples.size());

    double pos_err = 0.0, e_err = 0.0;
    for (size_t i = 0; i < cart.samples.size(); ++i) {
      for (int k = 0; k < 3; ++k)
        pos_err = std::max(
            pos_err, (red.samples[i].config.q[k] - cart.samples[i].config.q[k]).norm());
      e_err = std::max(e_err, std::abs(red.samples[i].E - r.E));
    }
    CHECK(pos_err <= 1e-6);
    CHECK(e_err <= 1e-8);
  }
}

TEST_CASE("integrate_reduced rejects initial data inconsistent with E") {
  const Fixture fx = fixture_orbit("lagrange_circular");
  const ReducedStart r = reduced_initial_data(fx.config);
  IntegratorConfig cfg;
  CHECK_THROWS_AS(
      integrate_reduced(r.shape, r.dshape_ds, r.I, r.dI_dt, r.theta, r.E + 1e-3, r.C, cfg),
      std::invalid_argument);
}

TEST_CASE("fixture_orbit values") {
  const Fixture lag = fixture_orbit("lagrange_circular");
  const auto [e, c] = conserved_quantities(lag.config);
  CHECK(e == doctest::Approx(lag.E).epsilon(1e-13));
  CHECK(c == doctest::Approx(lag.C).epsilon(1e-13));

  const Fixture eul = fixture_orbit("euler_collinear_circular");
  const auto [ee, ce] = conserved_quantities(eul.config);
  CHECK(ee == doctest::Approx(eul.E).epsilon(1e-13));
  CHECK(ce == doctest::Approx(eul.C).epsilon(1e-13));
  CHECK(eul.config.moment_of_inertia() == doctest::Approx(1.0).epsilon(1e-14));

  const Fixture gen = fixture_orbit("generic_perturbed");
  CHECK(gen.config.center_of_mass().norm() < 1e-15);

  CHECK_THROWS_AS(fixture_orbit("no_such_fixture"), std::invalid_argument);
}
