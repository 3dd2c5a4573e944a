#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "saari/conjecture.hpp"
#include "saari/dynamics.hpp"
#include "saari/invariant_fields.hpp"
#include "saari/io.hpp"
#include "saari/sampling.hpp"

using namespace saari;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  unsigned long seed = 0;
  double tol = 0.0;  // 0 = per-command default
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "output file path");
  cmd->add_option("--format", c.format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--tol", c.tol, "tolerance override");
  cmd->set_config("--config", "", "flat key=value config file for this command");
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOpts& common, const std::string& fixture, const IntegratorConfig& cfg) {
  const Fixture fx = fixture_orbit(fixture);
  const Trajectory traj = integrate_cartesian(fx.config, cfg);

  double e_drift = 0.0, c_drift = 0.0;
  for (const auto& p : traj.samples) {
    e_drift = std::max(e_drift, std::abs(p.E - fx.E));
    c_drift = std::max(c_drift, std::abs(p.C - fx.C));
  }
  const double class_tol = common.tol > 0.0 ? common.tol : 1e-6;
  const TrajectoryClassification cls = classify_trajectory(traj, class_tol);

  const std::string path =
      common.out.empty() ? ("trajectory." + common.format) : common.out;
  if (common.format == "json") {
    write_file(path, trajectory_json(traj).dump(2) + "\n");
  } else {
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    write_file(path, os.str());
  }

  std::printf("samples: %zu\n", traj.samples.size());
  std::printf("E drift: %.3e  C drift: %.3e\n", e_drift, c_drift);
  std::printf("classification: %s (mu drift %.3e, shape drift %.3e)\n", cls.verdict.c_str(),
              cls.mu_drift, cls.shape_drift);
  if (traj.collision_abort) std::printf("note: truncated at a collision approach\n");
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// verify-identities
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
};

int cmd_verify_identities(const CommonOpts& common, int samples) {
  std::mt19937_64 rng(common.seed);
  std::vector<ShapePoint> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i) pts.push_back(sample_shape(rng));

  auto tol = [&](double dflt) { return common.tol > 0.0 ? common.tol : dflt; };
  Check ck_nu{"nu-identity", 0.0, tol(1e-12)};
  Check ck_mu3{"mu3-consistency", 0.0, tol(1e-12)};
  Check ck_sym{"symmetric-invariance", 0.0, tol(1e-12)};
  Check ck_iso{"metric-isometry", 0.0, tol(1e-10)};
  Check ck_g{"cross-route-grad-norm-sq", 0.0, tol(1e-6)};
  Check ck_l{"cross-route-laplacian", 0.0, tol(1e-6)};
  Check ck_lam{"cross-route-lambda", 0.0, tol(1e-6)};
  Check ck_d{"cross-route-d-rho-sq", 0.0, tol(1e-6)};
  Check ck_fs{"field-symmetry", 0.0, tol(1e-10)};
  Check ck_cp{"critical-point-vanishing", 0.0, tol(1e-10)};
  Check ck_col{"collinear-d-rho-sq", 0.0, tol(1e-10)};

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const ShapePoint& z : pts) {
    const SymmetricInvariants s = symmetric_invariants(mu_parts(z));
    ck_nu.max_residual =
        std::max(ck_nu.max_residual,
                 std::abs(s.nu * s.nu - (2.0 * s.mu * s.rho + 3.0 * s.rho * s.rho)) /
                     std::max(1.0, s.nu * s.nu));
    const auto [r1, r2] = shape_ratios(z);
    ck_mu3.max_residual = std::max(ck_mu3.max_residual,
                                   std::abs(mu3_from_zeta(z) - mu3_from_ratios(r1, r2)));

    if (std::hypot(z.x - 0.5, z.y) > 1e-2) {
      for (const ShapePoint w : {cyclic_shape_map(z), reflect_shape_map(z)}) {
        const SymmetricInvariants sw = symmetric_invariants(mu_parts(w));
        ck_sym.max_residual = std::max({ck_sym.max_residual, rel_diff(sw.mu, s.mu),
                                        rel_diff(sw.nu, s.nu), rel_diff(sw.rho, s.rho)});
      }
      const Vec2 dz(u(rng), u(rng));
      const double speed = shape_metric_speed(z, dz);
      const Complex pushed = cyclic_map_derivative(z) * Complex(dz.x(), dz.y());
      const double speed_cyc =
          shape_metric_speed(cyclic_shape_map(z), Vec2(pushed.real(), pushed.imag()));
      ck_iso.max_residual = std::max(ck_iso.max_residual, rel_diff(speed_cyc, speed));
    }

    const InvariantFieldValues xy = invariant_fields_xy(z);
    const InvariantFieldValues cf = closed_forms(s);
    ck_g.max_residual = std::max(ck_g.max_residual, rel_diff(xy.grad_norm_sq, cf.grad_norm_sq));
    ck_l.max_residual = std::max(ck_l.max_residual, rel_diff(xy.laplacian, cf.laplacian));
    ck_lam.max_residual = std::max(ck_lam.max_residual, rel_diff(xy.lambda, cf.lambda));
    ck_d.max_residual = std::max(ck_d.max_residual, rel_diff(xy.d_rho_sq, cf.d_rho_sq));

    if (std::hypot(z.x - 0.5, z.y) > 1e-2) {
      for (const ShapePoint w : {cyclic_shape_map(z), reflect_shape_map(z)}) {
        const InvariantFieldValues fw = invariant_fields_xy(w);
        ck_fs.max_residual = std::max({ck_fs.max_residual, rel_diff(fw.grad_norm_sq, xy.grad_norm_sq),
                                       rel_diff(fw.laplacian, xy.laplacian),
                                       rel_diff(fw.lambda, xy.lambda),
                                       rel_diff(fw.d_rho_sq, xy.d_rho_sq)});
      }
    }
  }

  for (const CentralConfiguration& cc : central_configurations()) {
    const InvariantFieldValues f = invariant_fields_xy(cc.shape);
    ck_cp.max_residual = std::max(
        {ck_cp.max_residual, f.grad_norm_sq, std::abs(f.lambda), f.d_rho_sq});
  }

  std::uniform_real_distribution<double> ux(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x = ux(rng);
    if (std::abs(x - 0.5) < 0.01 || std::abs(x + 0.5) < 0.01) continue;
    ck_col.max_residual =
        std::max(ck_col.max_residual, invariant_fields_xy({x, 0.0}).d_rho_sq);
  }

  const std::vector<Check> checks = {ck_nu, ck_mu3, ck_sym, ck_iso, ck_g, ck_l,
                                     ck_lam, ck_d, ck_fs, ck_cp, ck_col};
  json report;
  report["seed"] = common.seed;
  report["samples"] = samples;
  bool all_pass = true;
  auto& arr = report["checks"] = json::array();
  for (const Check& c : checks) {
    const bool pass = c.max_residual <= c.tolerance;
    all_pass = all_pass && pass;
    arr.push_back({{"name", c.name},
                   {"max_residual", c.max_residual},
                   {"tolerance", c.tolerance},
                   {"pass", pass}});
    std::printf("%-28s tol %.1e  max %.3e  %s\n", c.name.c_str(), c.tolerance, c.max_residual,
                pass ? "PASS" : "FAIL");
  }
  report["all_pass"] = all_pass;
  const std::string path = common.out.empty() ? "identities_report.json" : common.out;
  write_file(path, report.dump(2) + "\n");
  std::printf("wrote %s\n", path.c_str());
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify-proof
// ---------------------------------------------------------------------------

int cmd_verify_proof(const CommonOpts& common, double mu_min, double mu_max, int mu_points,
                     double mu_single, bool c_scan, int fit_stride) {
  std::vector<double> grid;
  if (mu_single > 0.0) {
    if (mu_single < 3.0) {
      std::fprintf(stderr, "error: unphysical mu %.17g (equal-mass bound requires mu >= 3)\n",
                   mu_single);
      return 1;
    }
    grid.push_back(mu_single);
  } else {
    if (mu_min < 3.0) {
      std::fprintf(stderr, "error: unphysical mu %.17g (equal-mass bound requires mu >= 3)\n",
                   mu_min);
      return 1;
    }
    const double l0 = std::log(mu_min), l1 = std::log(mu_max);
    for (int i = 0; i < mu_points; ++i)
      grid.push_back(std::exp(l0 + (l1 - l0) * i / std::max(1, mu_points - 1)));
  }

  const ProofReport report = verify_no_constant_mu_orbit(grid, fit_stride);
  json j = proof_report_json(report);

  const double fit_tol = common.tol > 0.0 ? common.tol : 1e-5;
  bool fits_ok = true;
  for (const auto& e : report.entries)
    if (!std::isnan(e.series_fit_error)) fits_ok = fits_ok && e.series_fit_error <= fit_tol;
  j["series_fit_tolerance"] = fit_tol;
  j["series_fits_pass"] = fits_ok;

  bool scan_ok = true;
  if (c_scan) {
    // locate the roots of the closed-form sqrt(rho) coefficient by bisection
    auto root_near = [&](double mu0, double lo, double hi) {
      auto f = [&](double c) { return sqrt_rho_coefficient(mu0, c); };
      double a = lo, b = hi;
      for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (f(a) * f(m) <= 0.0)
          b = m;
        else
          a = m;
      }
      return 0.5 * (a + b);
    };
    auto& roots = j["C_scan_roots"] = json::array();
    for (const auto& e : report.entries) {
      // branch 1 is a double root of the coefficient; scan the cube of the
      // numerator factor via the sign of (1 + C t) instead
      const double t = std::sqrt(2.0 * e.mu0 * e.mu0 - 1.0);
      const double r1 = -1.0 / t;  // exact zero of the squared factor
      const double r2 = root_near(e.mu0, e.C2 - 0.5, e.C2 + 0.5);
      const double err1 = std::abs(sqrt_rho_coefficient(e.mu0, r1));
      const double err2 = std::abs(r2 - e.C2);
      scan_ok = scan_ok && err1 <= 1e-9 && err2 <= 1e-9;
      roots.push_back({{"mu0", e.mu0}, {"root1", r1}, {"root2", r2}});
      std::printf("C-scan mu=%.6g: root2 found %.12g (branch value %.12g, err %.2e)\n", e.mu0, r2,
                  e.C2, err2);
    }
    j["C_scan_pass"] = scan_ok;
  }

  const std::string path = common.out.empty() ? "proof_report.json" : common.out;
  write_file(path, j.dump(2) + "\n");

  std::printf("mu grid: %zu points in [%.6g, %.6g]\n", grid.size(), grid.front(), grid.back());
  std::printf("obstruction signs: %s  (min |obstruction| %.6e)\n",
              report.holds ? "hold everywhere" : "VIOLATED", report.min_abs_obstruction);
  std::printf("series fits: %s\n", fits_ok ? "pass" : "FAIL");
  std::printf("verdict: %s\n", report.holds ? "obstruction holds" : "obstruction violated");
  std::printf("wrote %s\n", path.c_str());
  return (report.holds && fits_ok && scan_ok) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// trace-levelset
// ---------------------------------------------------------------------------

int cmd_trace_levelset(const CommonOpts& common, double mu0, const std::string& seed_near) {
  if (!(mu0 > 3.0)) {
    std::fprintf(stderr, "error: mu0 must exceed the global minimum 3 (got %.17g)\n", mu0);
    return 1;
  }
  const ShapePoint seed = find_level_seed(mu0, seed_near);
  TraceOptions opts;
  if (common.tol > 0.0) opts.corrector_tol = common.tol;
  const LevelSetTrace trace = trace_level_set(mu0, seed, opts);

  std::ostringstream os;
  write_polyline_csv(os, trace);
  const std::string path = common.out.empty() ? "levelset.csv" : common.out;
  write_file(path, os.str());

  std::printf("vertices: %zu  closed: %s  truncated: %s\n", trace.vertices.size(),
              trace.closed ? "yes" : "no", trace.truncated ? "yes" : "no");
  std::printf("rho range: [%.12g, %.12g]\n", trace.rho_min, trace.rho_max);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// central-configs
// ---------------------------------------------------------------------------

int cmd_central_configs(const CommonOpts& common) {
  const auto configs = central_configurations();
  json j = json::array();
  std::printf("%-12s %-12s %-14s %-12s\n", "x", "y", "mu", "|grad mu|^2");
  for (const auto& c : configs) {
    const double g2 = grad_norm_sq_xy(c.shape);
    std::printf("%-12.6g %-12.6g %-14.10g %-12.3e\n", c.shape.x, c.shape.y, c.mu, g2);
    j.push_back({{"x", c.shape.x}, {"y", c.shape.y}, {"mu", c.mu}, {"grad_norm_sq", g2}});
  }
  if (!common.out.empty()) {
    if (common.format == "json") {
      write_file(common.out, j.dump(2) + "\n");
    } else {
      std::string csv = "x,y,mu,grad_norm_sq\n";
      char buf[160];
      for (const auto& c : configs) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", c.shape.x, c.shape.y, c.mu,
                      grad_norm_sq_xy(c.shape));
        csv += buf;
      }
      write_file(common.out, csv);
    }
    std::printf("wrote %s\n", common.out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shape-sphere reduction of the planar equal-mass three-body problem and "
               "verification of the constant-mu obstruction"};
  app.require_subcommand(1);

  CommonOpts common;

  auto* sim = app.add_subcommand("simulate", "integrate an orbit and export the trajectory");
  std::string fixture = "lagrange_circular";
  IntegratorConfig icfg;
  add_common(sim, common);
  sim->add_option("--fixture", fixture,
                  "lagrange_circular|euler_collinear_circular|equilateral_freefall|generic_perturbed");
  sim->add_option("--t-span", icfg.t_span, "integration span");
  sim->add_option("--rel-tol", icfg.rel_tol, "relative tolerance");
  sim->add_option("--abs-tol", icfg.abs_tol, "absolute tolerance");
  sim->add_option("--dt-sample", icfg.dt_sample, "output sampling interval");
  sim->add_option("--max-step", icfg.max_step, "max integrator step (0 = dt-sample)");
  sim->add_option("--min-distance", icfg.min_distance, "collision abort threshold");

  auto* vid = app.add_subcommand("verify-identities",
                                 "cross-route and symmetry checks on random shapes");
  int samples = 1000;
  add_common(vid, common);
  vid->add_option("--samples", samples, "number of random shapes");

  auto* vp = app.add_subcommand("verify-proof", "branch roots, obstruction signs and series fits");
  double mu_min = 3.0, mu_max = 100.0, mu_single = 0.0;
  int mu_points = 1000, fit_stride = 25;
  bool c_scan = false;
  add_common(vp, common);
  vp->add_option("--mu-min", mu_min, "grid start");
  vp->add_option("--mu-max", mu_max, "grid end");
  vp->add_option("--mu-points", mu_points, "grid size (log-spaced)");
  vp->add_option("--mu", mu_single, "single mu value instead of a grid");
  vp->add_flag("--C-scan", c_scan, "root-find the sqrt(rho) coefficient over C");
  vp->add_option("--fit-stride", fit_stride, "series-fit every n-th grid point");

  auto* tls = app.add_subcommand("trace-levelset", "trace the mu = mu0 level curve");
  double mu0 = 3.2;
  std::string seed_near = "lagrange";
  add_common(tls, common);
  tls->add_option("--mu0", mu0, "level value (> 3)")->required();
  tls->add_option("--seed-near", seed_near, "anchor for the seed search: lagrange|euler");

  auto* cc = app.add_subcommand("central-configs", "list the five central configurations");
  add_common(cc, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(common, fixture, icfg);
    if (vid->parsed()) return cmd_verify_identities(common, samples);
    if (vp->parsed())
      return cmd_verify_proof(common, mu_min, mu_max, mu_points, mu_single, c_scan, fit_stride);
    if (tls->parsed()) return cmd_trace_levelset(common, mu0, seed_near);
    if (cc->parsed()) return cmd_central_configs(common);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
