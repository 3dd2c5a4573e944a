#include "saari/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "saari/invariant_fields.hpp"
#include "saari/ode.hpp"

namespace saari {

namespace {

using State12 = Eigen::Matrix<double, 12, 1>;
using State8 = Eigen::Matrix<double, 8, 1>;

Complex to_complex(const Vec2& v) { return {v.x(), v.y()}; }

PlanarConfig unpack12(const State12& y) {
  PlanarConfig c;
  for (int k = 0; k < 3; ++k) {
    c.q[k] = Vec2(y[2 * k], y[2 * k + 1]);
    c.v[k] = Vec2(y[6 + 2 * k], y[6 + 2 * k + 1]);
  }
  return c;
}

State12 pack12(const PlanarConfig& c) {
  State12 y;
  for (int k = 0; k < 3; ++k) {
    y[2 * k] = c.q[k].x();
    y[2 * k + 1] = c.q[k].y();
    y[6 + 2 * k] = c.v[k].x();
    y[6 + 2 * k + 1] = c.v[k].y();
  }
  return y;
}

double potential(const PlanarConfig& c) {
  const double r12 = c.pair_distance(0, 1);
  const double r23 = c.pair_distance(1, 2);
  const double r31 = c.pair_distance(2, 0);
  if (std::min({r12, r23, r31}) < kCollisionEps)
    throw std::domain_error("potential undefined: collision");
  return 1.0 / r12 + 1.0 / r23 + 1.0 / r31;
}

TrajectorySample make_sample(double t, const PlanarConfig& config) {
  TrajectorySample smp;
  smp.t = t;
  smp.config = config;
  const auto [shape, so] = reduce_configuration(config);
  smp.shape = shape;
  smp.I = so.I;
  smp.theta = so.theta;
  std::tie(smp.E, smp.C) = conserved_quantities(config);
  return smp;
}

// Non-uniform 3-point first derivative at the middle node.
double d1(double fm, double f0, double fp, double dm, double dp) {
  return -dp / (dm * (dm + dp)) * fm + (dp - dm) / (dp * dm) * f0 +
         dm / (dp * (dm + dp)) * fp;
}

// Non-uniform 3-point second derivative at the middle node.
double d2(double fm, double f0, double fp, double dm, double dp) {
  return 2.0 * (dm * fp - (dm + dp) * f0 + dp * fm) / (dp * dm * (dp + dm));
}

void check_com_frame(const PlanarConfig& c) {
  const double scale = std::max(1.0, std::sqrt(c.moment_of_inertia()));
  if (c.center_of_mass().norm() > 1e-9 * scale)
    throw std::invalid_argument("configuration is not in the center-of-mass frame");
}

}  // namespace

std::array<Vec2, 3> newton_acceleration(const PlanarConfig& config) {
  std::array<Vec2, 3> a{Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Vec2 d = config.q[j] - config.q[i];
      const double r = d.norm();
      if (r < kCollisionEps)
        throw std::domain_error("collision between bodies " + std::to_string(i + 1) + " and " +
                                std::to_string(j + 1));
      const Vec2 f = d / (r * r * r);
      a[i] += f;
      a[j] -= f;
    }
  }
  return a;
}

std::pair<double, double> conserved_quantities(const PlanarConfig& config) {
  double kin = 0.0, ang = 0.0;
  for (int k = 0; k < 3; ++k) {
    kin += 0.5 * config.v[k].squaredNorm();
    ang += config.q[k].x() * config.v[k].y() - config.q[k].y() * config.v[k].x();
  }
  return {kin - potential(config), ang};
}

Complex shape_time_derivative(const PlanarConfig& config) {
  const Complex q1 = to_complex(config.q[0]), q2 = to_complex(config.q[1]),
                q3 = to_complex(config.q[2]);
  const Complex v1 = to_complex(config.v[0]), v2 = to_complex(config.v[1]),
                v3 = to_complex(config.v[2]);
  const Complex base = q2 - q1;
  if (std::abs(base) < kCollisionEps)
    throw std::domain_error("shape coordinate singular: bodies 1 and 2 coincide");
  return 1.5 * (v3 * base - q3 * (v2 - v1)) / (base * base);
}

double s_time_rate(const ShapePoint& shape, double I) {
  if (!(I > 0.0)) throw std::domain_error("s_time_rate: I must be positive");
  return (1.0 + (4.0 / 3.0) * shape.norm_sq()) / (2.0 * I);
}

std::pair<double, double> reduced_conserved_quantities(const PlanarConfig& config) {
  const auto [shape, so] = reduce_configuration(config);
  const Complex zeta = shape.zeta();
  const Complex dzeta = shape_time_derivative(config);

  double Idot = 0.0;
  for (int k = 0; k < 3; ++k) Idot += 2.0 * config.q[k].dot(config.v[k]);

  const Complex base = to_complex(config.q[1]) - to_complex(config.q[0]);
  const Complex dbase = to_complex(config.v[1]) - to_complex(config.v[0]);
  const double theta_dot = std::imag(dbase / base);

  const double c = (4.0 / 3.0) * std::norm(zeta);
  const double wedge = std::imag(std::conj(zeta) * dzeta);  // x dy/dt - y dx/dt
  const double C = so.I * (theta_dot + (4.0 / 3.0) * wedge / (1.0 + c));
  const double shape_kin =
      0.5 * so.I * (4.0 / 3.0) * std::norm(dzeta) / ((1.0 + c) * (1.0 + c));
  const double E = Idot * Idot / (8.0 * so.I) + C * C / (2.0 * so.I) + shape_kin -
                   mu_field(shape) / std::sqrt(so.I);
  return {E, C};
}

Trajectory integrate_cartesian(const PlanarConfig& state0, const IntegratorConfig& cfg) {
  check_com_frame(state0);
  if (state0.min_pair_distance() < cfg.min_distance)
    throw std::invalid_argument("initial configuration is already inside the collision threshold");

  Trajectory traj;
  traj.dt_sample = cfg.dt_sample;

  OdeOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.max_step = cfg.max_step > 0.0 ? cfg.max_step : cfg.dt_sample;

  auto rhs = [](double, const State12& y, State12& dydt) {
    const PlanarConfig c = unpack12(y);
    const auto a = newton_acceleration(c);
    for (int k = 0; k < 3; ++k) {
      dydt[2 * k] = c.v[k].x();
      dydt[2 * k + 1] = c.v[k].y();
      dydt[6 + 2 * k] = a[k].x();
      dydt[6 + 2 * k + 1] = a[k].y();
    }
  };
  auto sink = [&](double t, const State12& y) { traj.samples.push_back(make_sample(t, unpack12(y))); };
  auto stop = [&](double, const State12& y) {
    return unpack12(y).min_pair_distance() < cfg.min_distance;
  };

  traj.collision_abort =
      integrate_dopri5<State12>(rhs, pack12(state0), 0.0, cfg.t_span, cfg.dt_sample, opts, sink, stop);

  const auto s = reparametrize_time(traj);
  for (size_t k = 0; k < s.size(); ++k) traj.samples[k].s = s[k];
  return traj;
}

std::vector<double> reparametrize_time(const Trajectory& traj) {
  const auto& smp = traj.samples;
  std::vector<double> s(smp.size(), 0.0);
  if (smp.empty()) return s;
  double prev_rate = s_time_rate(smp[0].shape, smp[0].I);
  for (size_t k = 1; k < smp.size(); ++k) {
    const double rate = s_time_rate(smp[k].shape, smp[k].I);
    s[k] = s[k - 1] + (smp[k].t - smp[k - 1].t) * 0.5 * (rate + prev_rate);
    prev_rate = rate;
  }
  return s;
}

std::vector<double> lagrange_jacobi_residual(const Trajectory& traj) {
  const auto& smp = traj.samples;
  if (smp.size() < 3) throw std::invalid_argument("lagrange_jacobi_residual: need >= 3 samples");
  std::vector<double> res(smp.size() - 2);
  for (size_t k = 1; k + 1 < smp.size(); ++k) {
    const double dm = smp[k].t - smp[k - 1].t;
    const double dp = smp[k + 1].t - smp[k].t;
    const double ddI = d2(smp[k - 1].I, smp[k].I, smp[k + 1].I, dm, dp);
    res[k - 1] = ddI - (4.0 * smp[k].E + 2.0 * potential(smp[k].config));
  }
  return res;
}

std::vector<double> saari_relation_residual(const Trajectory& traj) {
  const auto& smp = traj.samples;
  if (smp.size() < 3) throw std::invalid_argument("saari_relation_residual: need >= 3 samples");
  std::vector<double> f(smp.size()), mu(smp.size());
  for (size_t k = 0; k < smp.size(); ++k) {
    const Complex dzeta_dt = shape_time_derivative(smp[k].config);
    const double rate = s_time_rate(smp[k].shape, smp[k].I);
    f[k] = std::norm(dzeta_dt / rate) / 6.0;  // |dx/ds|^2 / 6
    mu[k] = mu_field(smp[k].shape);
  }
  std::vector<double> res(smp.size() - 2);
  for (size_t k = 1; k + 1 < smp.size(); ++k) {
    const double dm = smp[k].s - smp[k - 1].s;
    const double dp = smp[k + 1].s - smp[k].s;
    const double lhs = d1(f[k - 1], f[k], f[k + 1], dm, dp);
    const double rhs = std::sqrt(smp[k].I) * d1(mu[k - 1], mu[k], mu[k + 1], dm, dp);
    res[k - 1] = lhs - rhs;
  }
  return res;
}

std::vector<Vec2> shape_eom_residual(const Trajectory& traj) {
  const auto& smp = traj.samples;
  if (smp.size() < 3) throw std::invalid_argument("shape_eom_residual: need >= 3 samples");
  const double near_collision = 1e-3;
  std::vector<Vec2> res(smp.size() - 2);
  for (size_t k = 1; k + 1 < smp.size(); ++k) {
    if (smp[k - 1].config.min_pair_distance() < near_collision ||
        smp[k].config.min_pair_distance() < near_collision ||
        smp[k + 1].config.min_pair_distance() < near_collision) {
      res[k - 1] = Vec2(std::nan(""), std::nan(""));
      continue;
    }
    const double dm = smp[k].s - smp[k - 1].s;
    const double dp = smp[k + 1].s - smp[k].s;
    const double u = d1(smp[k - 1].shape.x, smp[k].shape.x, smp[k + 1].shape.x, dm, dp);
    const double w = d1(smp[k - 1].shape.y, smp[k].shape.y, smp[k + 1].shape.y, dm, dp);
    const Vec2 acc(d2(smp[k - 1].shape.x, smp[k].shape.x, smp[k + 1].shape.x, dm, dp),
                   d2(smp[k - 1].shape.y, smp[k].shape.y, smp[k + 1].shape.y, dm, dp));
    const double c = (4.0 / 3.0) * smp[k].shape.norm_sq();
    const double pref =
        (4.0 * smp[k].C - (8.0 / 3.0) * (smp[k].shape.x * w - smp[k].shape.y * u)) / (1.0 + c);
    const Vec2 expected = pref * Vec2(w, -u) + 3.0 * std::sqrt(smp[k].I) * mu_gradient(smp[k].shape);
    res[k - 1] = acc - expected;
  }
  return res;
}

Trajectory integrate_reduced(const ShapePoint& shape0, const Vec2& dshape0_ds, double I0,
                             double dI0_dt, double theta0, double E, double C,
                             const IntegratorConfig& cfg) {
  if (!(I0 > 0.0)) throw std::invalid_argument("integrate_reduced: I0 must be positive");
  const double E_check = dI0_dt * dI0_dt / (8.0 * I0) + C * C / (2.0 * I0) +
                         dshape0_ds.squaredNorm() / (6.0 * I0) - mu_field(shape0) / std::sqrt(I0);
  if (std::abs(E_check - E) > 1e-8)
    throw std::invalid_argument("integrate_reduced: initial data inconsistent with E");

  Trajectory traj;
  traj.dt_sample = cfg.dt_sample;

  OdeOptions opts;
  opts.rel_tol = cfg.rel_tol;
  opts.abs_tol = cfg.abs_tol;
  opts.max_step = cfg.max_step > 0.0 ? cfg.max_step : cfg.dt_sample;

  // state: x, y, u = dx/ds, w = dy/ds, I, J = dI/dt, theta, s
  auto rhs = [&](double, const State8& y, State8& dydt) {
    const ShapePoint z{y[0], y[1]};
    const double u = y[2], w = y[3], I = y[4], J = y[5];
    const double c = (4.0 / 3.0) * z.norm_sq();
    const double sigma = (1.0 + c) / (2.0 * I);
    const double wedge = z.x * w - z.y * u;
    const double pref = (4.0 * C - (8.0 / 3.0) * wedge) / (1.0 + c);
    const Vec2 grad = mu_gradient(z);
    const double sqrtI = std::sqrt(I);
    dydt[0] = sigma * u;
    dydt[1] = sigma * w;
    dydt[2] = sigma * (pref * w + 3.0 * sqrtI * grad.x());
    dydt[3] = sigma * (-pref * u + 3.0 * sqrtI * grad.y());
    dydt[4] = J;
    dydt[5] = 4.0 * E + 2.0 * mu_field(z) / sqrtI;
    dydt[6] = (C - (2.0 / 3.0) * wedge) / I;
    dydt[7] = sigma;
  };

  auto reconstruct_state = [&](double t, const State8& y) {
    const ShapePoint z{y[0], y[1]};
    const double I = y[4], J = y[5], theta = y[6];
    const double sigma = s_time_rate(z, I);
    const Complex dzeta = Complex(y[2], y[3]) * sigma;  // d zeta/dt
    const Complex zeta = z.zeta();

    PlanarConfig config = reconstruct_configuration(z, SizeOrientation{I, theta});
    // velocities: differentiate q_k = F xi_k with F = sqrt(I) e^{i theta}/|xi|
    const std::array<Complex, 3> xi = {-0.5 - zeta / 3.0, 0.5 - zeta / 3.0, 2.0 * zeta / 3.0};
    const std::array<Complex, 3> dxi = {-dzeta / 3.0, -dzeta / 3.0, 2.0 * dzeta / 3.0};
    const double norm_sq = std::norm(xi[0]) + std::norm(xi[1]) + std::norm(xi[2]);
    const double xin = std::sqrt(norm_sq);
    const double dxin = (2.0 / 3.0) * std::real(std::conj(zeta) * dzeta) / xin;
    const double theta_dot = (C - (2.0 / 3.0) * (z.x * y[3] - z.y * y[2])) / I;
    const Complex F = std::sqrt(I) * std::exp(Complex(0.0, theta)) / xin;
    const Complex dF = F * (J / (2.0 * I) + Complex(0.0, theta_dot) - dxin / xin);
    for (int k = 0; k < 3; ++k) {
      const Complex vk = dF * xi[k] + F * dxi[k];
      config.v[k] = Vec2(vk.real(), vk.imag());
    }

    TrajectorySample smp;
    smp.t = t;
    smp.s = y[7];
    smp.config = config;
    smp.shape = z;
    smp.I = I;
    smp.theta = theta;
    std::tie(smp.E, smp.C) = conserved_quantities(config);
    return smp;
  };

  auto sink = [&](double t, const State8& y) { traj.samples.push_back(reconstruct_state(t, y)); };
  auto stop = [&](double, const State8& y) {
    if (y[4] < 1e-12) return true;  // I -> 0
    const MuParts parts = mu_parts(ShapePoint{y[0], y[1]});
    const double max_part = std::max({parts.mu1, parts.mu2, parts.mu3});
    return std::sqrt(y[4]) / max_part < cfg.min_distance;  // min r_ij
  };

  State8 y0;
  y0 << shape0.x, shape0.y, dshape0_ds.x(), dshape0_ds.y(), I0, dI0_dt, theta0, 0.0;
  traj.collision_abort =
      integrate_dopri5<State8>(rhs, y0, 0.0, cfg.t_span, cfg.dt_sample, opts, sink, stop);
  return traj;
}

ReducedStart reduced_initial_data(const PlanarConfig& config) {
  ReducedStart r;
  const auto [shape, so] = reduce_configuration(config);
  r.shape = shape;
  r.I = so.I;
  r.theta = so.theta;
  for (int k = 0; k < 3; ++k) r.dI_dt += 2.0 * config.q[k].dot(config.v[k]);
  const Complex dzeta_dt = shape_time_derivative(config);
  const double rate = s_time_rate(shape, so.I);
  r.dshape_ds = Vec2(dzeta_dt.real() / rate, dzeta_dt.imag() / rate);
  std::tie(r.E, r.C) = conserved_quantities(config);
  return r;
}

Fixture fixture_orbit(std::string_view name) {
  const double h = std::sqrt(3.0) / 6.0;  // triangle centroid offset
  PlanarConfig equilateral;
  equilateral.q[0] = Vec2(-0.5, -h);
  equilateral.q[1] = Vec2(0.5, -h);
  equilateral.q[2] = Vec2(0.0, 1.0 / std::sqrt(3.0));

  if (name == "lagrange_circular") {
    const double omega = std::sqrt(3.0);
    Fixture f;
    f.config = equilateral;
    for (int k = 0; k < 3; ++k)
      f.config.v[k] = omega * Vec2(-f.config.q[k].y(), f.config.q[k].x());
    f.E = -1.5;
    f.C = std::sqrt(3.0);
    return f;
  }
  if (name == "euler_collinear_circular") {
    // bodies 1,2 at +-d with body 3 at the center; rigid rotation, I = 1
    const double d = 1.0 / std::sqrt(2.0);
    const double omega = std::sqrt(5.0 / (4.0 * d * d * d));
    Fixture f;
    f.config.q[0] = Vec2(-d, 0.0);
    f.config.q[1] = Vec2(d, 0.0);
    f.config.q[2] = Vec2::Zero();
    for (int k = 0; k < 3; ++k)
      f.config.v[k] = omega * Vec2(-f.config.q[k].y(), f.config.q[k].x());
    f.E = omega * omega / 2.0 - 5.0 / (2.0 * d);
    f.C = omega;
    return f;
  }
  if (name == "equilateral_freefall") {
    Fixture f;
    f.config = equilateral;
    f.E = -3.0;
    f.C = 0.0;
    return f;
  }
  if (name == "generic_perturbed") {
    Fixture f = fixture_orbit("lagrange_circular");
    f.config.q[2] += Vec2(0.01, 0.0);
    const Vec2 shift = f.config.center_of_mass();
    for (auto& q : f.config.q) q -= shift;
    std::tie(f.E, f.C) = conserved_quantities(f.config);
    return f;
  }
  throw std::invalid_argument("unknown fixture: " + std::string(name));
}

}  // namespace saari
