#include "saari/conjecture.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saari {

namespace {

constexpr double kCriticalGradEps = 1e-10;

// small-rho fit window and node count
constexpr double kFitLo = 1e-6;
constexpr double kFitHi = 1e-3;
constexpr int kFitNodes = 50;
// half-integer powers 0, 1/2, ..., 3 span the basis; the tail absorbs the
// truncation so the leading coefficients come out clean
constexpr int kFitPowers = 7;

Vec2 checked_gradient(const ShapePoint& shape) {
  const Vec2 g = mu_gradient(shape);
  if (g.norm() <= kCriticalGradEps)
    throw std::domain_error("velocity undefined on central configuration");
  return g;
}

// Least-squares fit of f against rho^{k/2}, k = 0..kFitPowers-1, on the
// log-spaced window; returns the coefficient vector.
template <class F>
Eigen::VectorXd fit_half_powers(F&& f) {
  Eigen::MatrixXd A(kFitNodes, kFitPowers);
  Eigen::VectorXd b(kFitNodes);
  const double lstep = std::log(kFitHi / kFitLo) / (kFitNodes - 1);
  for (int i = 0; i < kFitNodes; ++i) {
    const double rho = kFitLo * std::exp(i * lstep);
    const double sq = std::sqrt(rho);
    double p = 1.0;
    for (int j = 0; j < kFitPowers; ++j) {
      A(i, j) = p;
      p *= sq;
    }
    b(i) = f(rho);
  }
  // column equilibration keeps the vastly different power scales solvable
  Eigen::VectorXd scale(kFitPowers);
  for (int j = 0; j < kFitPowers; ++j) {
    scale(j) = A.col(j).norm();
    A.col(j) /= scale(j);
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return c.cwiseQuotient(scale);
}

}  // namespace

Vec2 level_set_velocity(const ShapePoint& shape, int epsilon) {
  const Vec2 g = checked_gradient(shape);
  const double f = std::numbers::sqrt3 * epsilon / g.norm();
  return {-f * g.y(), f * g.x()};
}

double orbit_curvature(const ShapePoint& shape, const NecessaryConditionContext& ctx, double sqrt_I,
                       int epsilon) {
  const Vec2 g = checked_gradient(shape);
  const double n = g.norm();
  const double c = (4.0 / 3.0) * shape.norm_sq();
  const double x_dot_g = shape.x * g.x() + shape.y * g.y();
  const double c_raw = epsilon * ctx.C;  // undo the epsilon absorption
  return (-4.0 * c_raw / ctx.v + (8.0 * epsilon / (3.0 * n)) * x_dot_g) / (1.0 + c) -
         3.0 * epsilon * sqrt_I * n / (ctx.v * ctx.v);
}

double implicit_curve_curvature(double fx, double fy, double fxx, double fxy, double fyy) {
  const double n = std::hypot(fx, fy);
  if (n <= kCriticalGradEps)
    throw std::domain_error("curvature undefined at a critical point");
  return (fy * fy * fxx - 2.0 * fx * fy * fxy + fx * fx * fyy) / (n * n * n);
}

double level_curvature(const ShapePoint& shape) {
  const Vec2 g = checked_gradient(shape);
  const Eigen::Matrix2d h = mu_hessian(shape);
  return implicit_curve_curvature(g.x(), g.y(), h(0, 0), h(0, 1), h(1, 1));
}

double required_sqrt_I(double mu, double rho, double C) {
  if (grad_norm_sq_closed(mu, rho) <= 0.0)
    throw std::domain_error("required_sqrt_I: |grad mu|^2 <= 0 (critical point)");
  return required_sqrt_I_closed(mu, rho, C);
}

double required_sqrt_I(const SymmetricInvariants& inv, double C) {
  return required_sqrt_I(inv.mu, inv.rho, C);
}

double required_sqrt_I_xy(const ShapePoint& shape, double C) {
  const Vec2 g = checked_gradient(shape);
  const Eigen::Matrix2d h = mu_hessian(shape);
  const double n2 = g.squaredNorm();
  const double n = std::sqrt(n2);
  const double c = (4.0 / 3.0) * shape.norm_sq();
  const double x_dot_g = shape.x * g.x() + shape.y * g.y();
  const double q = g.y() * g.y() * h(0, 0) - 2.0 * g.x() * g.y() * h(0, 1) +
                   g.x() * g.x() * h(1, 1);
  return -4.0 * C / (std::numbers::sqrt3 * (1.0 + c) * n) +
         8.0 * x_dot_g / (3.0 * (1.0 + c) * n2) - q / (n2 * n2);
}

std::optional<double> energy_rhs(double mu0, double rho, double C) {
  const double g2 = grad_norm_sq_closed(mu0, rho);
  if (g2 <= 0.0) throw std::domain_error("energy_rhs: |grad mu|^2 <= 0");
  const double sqrt_I = required_sqrt_I_closed(mu0, rho, C);
  if (sqrt_I <= 0.0) return std::nullopt;  // unphysical required size
  const double I = sqrt_I * sqrt_I;
  const double h = 1e-3 * rho;
  const double d =
      (required_sqrt_I_closed(mu0, rho + h, C) - required_sqrt_I_closed(mu0, rho - h, C)) /
      (2.0 * h);
  return 0.5 / (I * I) * (d_rho_sq_closed(mu0, rho) / g2) * d * d + (C * C + 1.0) / (2.0 * I) -
         mu0 / sqrt_I;
}

std::optional<double> energy_residual(double rho, const NecessaryConditionContext& ctx) {
  const auto rhs = energy_rhs(ctx.mu0, rho, ctx.C);
  if (!rhs) return std::nullopt;
  return *rhs - ctx.E;
}

SeriesCoefficients series_coefficients(double mu0, double C) {
  const double m2 = mu0 * mu0;
  if (!(2.0 * m2 - 1.0 > 0.0)) throw std::domain_error("series_coefficients: 2 mu^2 - 1 <= 0");
  const double t = std::sqrt(2.0 * m2 - 1.0);
  SeriesCoefficients a;
  a.a0 = 2.0 * (1.0 - m2 + C * t) / (mu0 * (1.0 - 2.0 * m2));
  a.a_half = 3.0 * std::numbers::sqrt2 * ((m2 - 2.0) * t - 2.0 * C * (2.0 * m2 - 1.0)) /
             ((1.0 - 2.0 * m2) * (1.0 - 2.0 * m2) * std::sqrt(mu0 * (2.0 * m2 - 1.0)));
  a.a1 = 3.0 * ((m2 - 2.0) * (1.0 + 6.0 * m2) - 2.0 * C * (1.0 + 7.0 * m2) * t) /
         (m2 * (2.0 * m2 - 1.0) * (2.0 * m2 - 1.0) * (2.0 * m2 - 1.0));
  return a;
}

std::pair<double, double> branch_C_values(double mu0) {
  const double t = std::sqrt(2.0 * mu0 * mu0 - 1.0);
  return {-1.0 / t, (mu0 * mu0 - 2.0) / (2.0 * t)};
}

double sqrt_rho_coefficient(double mu0, double C) {
  const double m2 = mu0 * mu0;
  const double t = std::sqrt(2.0 * m2 - 1.0);
  const double u = 1.0 + C * t;
  const double den = -1.0 + m2 - C * t;
  return -3.0 * std::pow(mu0, 2.5) * u * u * ((m2 - 2.0) - 2.0 * C * t) /
         (4.0 * std::numbers::sqrt2 * den * den * den);
}

double order_rho_obstruction(double mu0, int branch) {
  const double m2 = mu0 * mu0;
  if (branch == 1) return -9.0 * mu0 * (m2 - 2.0) / (16.0 * (2.0 * m2 - 1.0));
  if (branch == 2) return 3.0 * mu0 * (m2 - 2.0) / (4.0 * (2.0 * m2 - 1.0));
  throw std::invalid_argument("order_rho_obstruction: branch must be 1 or 2");
}

SeriesCoefficients fit_sqrt_I_series(double mu0, double C) {
  const Eigen::VectorXd c =
      fit_half_powers([&](double rho) { return required_sqrt_I_closed(mu0, rho, C); });
  return {c(0), c(1), c(2)};
}

EnergySeriesCoefficients fit_energy_series(double mu0, double C) {
  const Eigen::VectorXd c = fit_half_powers([&](double rho) {
    const auto v = energy_rhs(mu0, rho, C);
    if (!v) throw std::domain_error("fit_energy_series: unphysical required size in fit window");
    return *v;
  });
  return {c(0), c(1), c(2)};
}

// ---------------------------------------------------------------------------
// Level-set tracing
// ---------------------------------------------------------------------------

namespace {

// Newton correction onto mu = mu0 along the gradient direction.
bool correct_onto_level(ShapePoint& p, double mu0, double tol) {
  for (int it = 0; it < 12; ++it) {
    const double f = mu_field(p) - mu0;
    if (std::abs(f) <= tol) return true;
    const Vec2 g = mu_gradient(p);
    const double g2 = g.squaredNorm();
    if (g2 < kCriticalGradEps * kCriticalGradEps) return false;
    p.x -= g.x() * f / g2;
    p.y -= g.y() * f / g2;
  }
  return std::abs(mu_field(p) - mu0) <= tol;
}

double clamped_step(const ShapePoint& p, double base_step) {
  double kappa = 0.0;
  try {
    kappa = std::abs(level_curvature(p));
  } catch (const std::domain_error&) {
    return base_step;
  }
  if (kappa * base_step < 0.25) return base_step;
  return std::max(0.25 / kappa, 1e-9);
}

}  // namespace

LevelSetTrace trace_level_set(double mu0, const ShapePoint& seed, const TraceOptions& opts) {
  if (std::abs(mu_field(seed) - mu0) > 1e-6)
    throw std::invalid_argument("trace_level_set: seed is not on the level set");

  ShapePoint p = seed;
  if (!correct_onto_level(p, mu0, opts.corrector_tol))
    throw std::domain_error("trace_level_set: seed at a critical point");

  LevelSetTrace trace;
  auto push = [&](const ShapePoint& q) {
    trace.vertices.push_back({q.x, q.y, mu_field(q), rho_field(q)});
  };
  push(p);

  const ShapePoint start = p;
  Vec2 tangent_prev = level_set_velocity(p, +1).normalized();
  const double h_first = clamped_step(p, opts.base_step);
  double arc = 0.0;

  while (true) {
    if ((long)trace.vertices.size() >= opts.max_vertices) {
      trace.truncated = true;
      break;
    }
    Vec2 tangent = level_set_velocity(p, +1).normalized();
    if (tangent.dot(tangent_prev) < 0.0) tangent = -tangent;  // keep direction

    double h = clamped_step(p, opts.base_step);
    ShapePoint q;
    bool ok = false;
    for (int attempt = 0; attempt < 30 && !ok; ++attempt) {
      q = ShapePoint{p.x + h * tangent.x(), p.y + h * tangent.y()};
      ok = correct_onto_level(q, mu0, opts.corrector_tol);
      if (!ok) h *= 0.5;
      if (h < 1e-12) break;
    }
    if (!ok) throw std::runtime_error("trace_level_set: corrector stalled");

    push(q);
    arc += std::hypot(q.x - p.x, q.y - p.y);
    tangent_prev = tangent;
    p = q;

    if (std::sqrt(p.norm_sq()) > opts.r_max) {
      trace.truncated = true;
      break;
    }
    const double dist = std::hypot(p.x - start.x, p.y - start.y);
    if (arc > 5.0 * h_first && dist < 0.5 * std::max(h, h_first)) {
      trace.vertices.push_back(trace.vertices.front());  // close the polyline
      trace.closed = true;
      break;
    }
  }

  trace.rho_min = std::numeric_limits<double>::infinity();
  trace.rho_max = -std::numeric_limits<double>::infinity();
  for (const auto& v : trace.vertices) {
    trace.rho_min = std::min(trace.rho_min, v.rho);
    trace.rho_max = std::max(trace.rho_max, v.rho);
  }
  return trace;
}

ShapePoint find_level_seed(double mu0, std::string_view anchor) {
  ShapePoint a;
  if (anchor == "lagrange") {
    a = ShapePoint{0.0, std::numbers::sqrt3 / 2.0};
  } else if (anchor == "euler") {
    a = ShapePoint{0.0, 0.0};
  } else {
    throw std::invalid_argument("find_level_seed: anchor must be 'lagrange' or 'euler'");
  }
  const ShapePoint target{0.5, 0.0};  // two-body collision: mu -> infinity

  auto at = [&](double t) {
    return ShapePoint{a.x + t * (target.x - a.x), a.y + t * (target.y - a.y)};
  };
  auto f = [&](double t) { return mu_field(at(t)) - mu0; };

  // bracket the first crossing along the segment
  const int n_scan = 2000;
  const double t_end = 1.0 - 1e-4;
  double t_lo = 0.0, t_hi = -1.0;
  double f_lo = f(t_lo);
  for (int i = 1; i <= n_scan; ++i) {
    const double t = t_end * i / n_scan;
    const double ft = f(t);
    if (f_lo * ft <= 0.0) {
      t_hi = t;
      break;
    }
    t_lo = t;
    f_lo = ft;
  }
  if (t_hi < 0.0) throw std::invalid_argument("find_level_seed: no seed found on level set");

  for (int it = 0; it < 100; ++it) {
    const double tm = 0.5 * (t_lo + t_hi);
    if (f(t_lo) * f(tm) <= 0.0)
      t_hi = tm;
    else
      t_lo = tm;
  }
  return at(0.5 * (t_lo + t_hi));
}

// ---------------------------------------------------------------------------
// Central configurations, classification, proof report
// ---------------------------------------------------------------------------

std::vector<CentralConfiguration> central_configurations() {
  const double half_sqrt3 = std::numbers::sqrt3 / 2.0;
  const double mu_euler = 5.0 / std::numbers::sqrt2;
  std::vector<CentralConfiguration> out = {
      {{0.0, half_sqrt3}, 3.0},  {{0.0, -half_sqrt3}, 3.0}, {{-1.5, 0.0}, mu_euler},
      {{0.0, 0.0}, mu_euler},    {{1.5, 0.0}, mu_euler},
  };
  for (const auto& c : out) {
    if (grad_norm_sq_xy(c.shape) > 1e-10)
      throw std::logic_error("central_configurations: gradient does not vanish");
  }
  return out;
}

ShapePoint refine_critical_point(const ShapePoint& guess) {
  ShapePoint p = guess;
  for (int it = 0; it < 100; ++it) {
    const Vec2 g = mu_gradient(p);
    if (g.norm() < 1e-13) return p;
    const Eigen::Matrix2d h = mu_hessian(p);
    const Vec2 step = h.colPivHouseholderQr().solve(g);
    p.x -= step.x();
    p.y -= step.y();
  }
  throw std::runtime_error("refine_critical_point: no convergence");
}

TrajectoryClassification classify_trajectory(const Trajectory& traj, double tol) {
  const auto& smp = traj.samples;
  if (smp.size() < 2) throw std::invalid_argument("classify_trajectory: need >= 2 samples");

  double mu_sum = 0.0;
  std::vector<double> mus(smp.size());
  for (size_t k = 0; k < smp.size(); ++k) {
    mus[k] = mu_field(smp[k].shape);
    mu_sum += mus[k];
  }
  const double mu_mean = mu_sum / smp.size();

  TrajectoryClassification out;
  for (size_t k = 0; k < smp.size(); ++k) {
    out.mu_drift = std::max(out.mu_drift, std::abs(mus[k] - mu_mean));
    out.shape_drift =
        std::max(out.shape_drift, std::abs(smp[k].shape.zeta() - smp[0].shape.zeta()));
  }
  if (out.shape_drift <= tol)
    out.verdict = "homographic";
  else if (out.mu_drift <= tol)
    out.verdict = "constant-mu non-homographic candidate";
  else
    out.verdict = "generic";
  return out;
}

ProofReport verify_no_constant_mu_orbit(std::span<const double> mu_grid, int fit_stride) {
  if (mu_grid.empty()) throw std::invalid_argument("verify_no_constant_mu_orbit: empty grid");
  if (fit_stride < 1) fit_stride = 1;

  ProofReport report;
  report.min_abs_obstruction = std::numeric_limits<double>::infinity();
  report.holds = true;

  for (size_t i = 0; i < mu_grid.size(); ++i) {
    const double mu0 = mu_grid[i];
    if (mu0 < 3.0) throw std::invalid_argument("verify_no_constant_mu_orbit: unphysical mu < 3");

    ProofEntry e;
    e.mu0 = mu0;
    std::tie(e.C1, e.C2) = branch_C_values(mu0);
    e.obstruction1 = order_rho_obstruction(mu0, 1);
    e.obstruction2 = order_rho_obstruction(mu0, 2);
    e.branch1_series = series_coefficients(mu0, e.C1);
    e.branch2_series = series_coefficients(mu0, e.C2);
    e.ok = e.obstruction1 < 0.0 && e.obstruction2 > 0.0;

    if (i % fit_stride == 0) {
      double worst = 0.0;
      for (const double c : {e.C1, e.C2}) {
        const SeriesCoefficients got = fit_sqrt_I_series(mu0, c);
        const SeriesCoefficients exp = series_coefficients(mu0, c);
        for (auto [g, x] : {std::pair{got.a0, exp.a0}, std::pair{got.a_half, exp.a_half},
                            std::pair{got.a1, exp.a1}}) {
          const double err = std::abs(x) > 1e-8 ? std::abs(g - x) / std::abs(x) : std::abs(g - x);
          worst = std::max(worst, err);
        }
      }
      e.series_fit_error = worst;
    } else {
      e.series_fit_error = std::numeric_limits<double>::quiet_NaN();
    }

    report.min_abs_obstruction = std::min(
        {report.min_abs_obstruction, std::abs(e.obstruction1), std::abs(e.obstruction2)});
    report.holds = report.holds && e.ok;
    report.entries.push_back(e);
  }
  return report;
}

std::vector<SweepPoint> residual_sweep(double mu0, std::span<const double> C_values, double rho_lo,
                                       double rho_hi, int n_rho) {
  if (n_rho < 2) throw std::invalid_argument("residual_sweep: need n_rho >= 2");
  std::vector<SweepPoint> out;
  out.reserve(C_values.size());
  for (const double C : C_values) {
    std::vector<std::optional<double>> vals(n_rho);
    std::vector<int> valid;
    for (int i = 0; i < n_rho; ++i) {
      const double rho = rho_lo + (rho_hi - rho_lo) * i / (n_rho - 1);
      vals[i] = energy_rhs(mu0, rho, C);
      if (vals[i]) valid.push_back(i);
    }
    SweepPoint pt;
    pt.C = C;
    if (valid.size() < 2) {
      pt.all_unphysical = true;
      pt.sup_residual = std::numeric_limits<double>::infinity();
    } else {
      const double e_ref = *vals[valid[valid.size() / 2]];
      double sup = 0.0;
      for (int i : valid) sup = std::max(sup, std::abs(*vals[i] - e_ref));
      // points with unphysical required size cannot host the motion at all
      if (valid.size() < vals.size()) sup = std::numeric_limits<double>::infinity();
      pt.sup_residual = sup;
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace saari
