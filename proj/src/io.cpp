#include "saari/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace saari {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,s,q1x,q1y,q2x,q2y,q3x,q3y,x,y,I,theta,E,C\n";
  for (const auto& p : traj.samples) {
    os << fmt(p.t) << ',' << fmt(p.s);
    for (int k = 0; k < 3; ++k)
      os << ',' << fmt(p.config.q[k].x()) << ',' << fmt(p.config.q[k].y());
    os << ',' << fmt(p.shape.x) << ',' << fmt(p.shape.y) << ',' << fmt(p.I) << ',' << fmt(p.theta)
       << ',' << fmt(p.E) << ',' << fmt(p.C) << '\n';
  }
}

nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json j;
  auto col = [&](const char* name, auto&& get) {
    auto& arr = j[name] = nlohmann::json::array();
    for (const auto& p : traj.samples) arr.push_back(get(p));
  };
  col("t", [](auto& p) { return p.t; });
  col("s", [](auto& p) { return p.s; });
  col("q1x", [](auto& p) { return p.config.q[0].x(); });
  col("q1y", [](auto& p) { return p.config.q[0].y(); });
  col("q2x", [](auto& p) { return p.config.q[1].x(); });
  col("q2y", [](auto& p) { return p.config.q[1].y(); });
  col("q3x", [](auto& p) { return p.config.q[2].x(); });
  col("q3y", [](auto& p) { return p.config.q[2].y(); });
  col("x", [](auto& p) { return p.shape.x; });
  col("y", [](auto& p) { return p.shape.y; });
  col("I", [](auto& p) { return p.I; });
  col("theta", [](auto& p) { return p.theta; });
  col("E", [](auto& p) { return p.E; });
  col("C", [](auto& p) { return p.C; });
  j["collision_abort"] = traj.collision_abort;
  return j;
}

void write_polyline_csv(std::ostream& os, const LevelSetTrace& trace) {
  os << "x,y,mu,rho\n";
  for (const auto& v : trace.vertices)
    os << fmt(v.x) << ',' << fmt(v.y) << ',' << fmt(v.mu) << ',' << fmt(v.rho) << '\n';
  os << "# rho_range " << fmt(trace.rho_min) << ' ' << fmt(trace.rho_max) << '\n';
}

nlohmann::json proof_report_json(const ProofReport& report) {
  nlohmann::json j;
  j["verdict"] = report.holds ? "obstruction holds" : "obstruction violated";
  j["min_abs_obstruction"] = report.min_abs_obstruction;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json je;
    je["mu0"] = e.mu0;
    je["C1"] = e.C1;
    je["C2"] = e.C2;
    je["obstruction1"] = e.obstruction1;
    je["obstruction2"] = e.obstruction2;
    if (std::isnan(e.series_fit_error))
      je["series_fit_error"] = nullptr;
    else
      je["series_fit_error"] = e.series_fit_error;
    je["branch1_sqrtI_series"] = {e.branch1_series.a0, e.branch1_series.a_half,
                                  e.branch1_series.a1};
    je["branch2_sqrtI_series"] = {e.branch2_series.a0, e.branch2_series.a_half,
                                  e.branch2_series.a1};
    je["verdict"] = e.ok ? "ok" : "violated";
    entries.push_back(std::move(je));
  }
  return j;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output path: " + path);
  os << contents;
  if (!os) throw std::runtime_error("write failed for output path: " + path);
}

}  // namespace saari
