#pragma once

#include <optional>
#include <span>
#include <string>

#include "sgg/analytic.hpp"
#include "sgg/scenarios.hpp"
#include "sgg/solver.hpp"

namespace sgg {

/// %.17g, enough digits to round-trip a double.
std::string format_double(double v);

/// Long-format snapshot dump, header `t,x,rho,S[,A]`.
std::string snapshots_to_csv(std::span<const FieldState> states, const Grid1D& grid);
/// Single snapshot, header `t,x,rho,S[,A]`.
std::string snapshot_to_csv(const FieldState& state, const Grid1D& grid);

std::string trajectory_to_csv(const FrontTrajectory& traj);

std::string profile_to_csv(const WaveProfile& profile);

/// RunReport as a JSON object (scalars plus arrays).
std::string report_to_json(const RunReport& report, const ScenarioPreset& preset,
                           const std::optional<SpeedResult>& analytic);

std::string speed_result_to_json(const SpeedResult& result);

void write_file(const std::string& path, const std::string& contents);

}  // namespace sgg
