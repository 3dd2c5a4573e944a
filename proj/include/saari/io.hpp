#pragma once

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>

#include "saari/conjecture.hpp"
#include "saari/dynamics.hpp"

namespace saari {

/// CSV with header t,s,q1x,q1y,q2x,q2y,q3x,q3y,x,y,I,theta,E,C, one row per
/// sample at full double precision.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// JSON object mirroring the CSV columns as arrays.
nlohmann::json trajectory_json(const Trajectory& traj);

/// Level-set polyline CSV x,y,mu,rho with a trailing comment line carrying
/// the rho range.
void write_polyline_csv(std::ostream& os, const LevelSetTrace& trace);

nlohmann::json proof_report_json(const ProofReport& report);

/// Write text to a file; throws std::runtime_error naming the path on
/// failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace saari
