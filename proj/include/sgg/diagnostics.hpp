#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sgg/state.hpp"

namespace sgg {

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Locate the front at S = S_min + fraction * (S_max - S_min).
struct SignalLevel {
  double fraction = 0.5;
};
/// Locate the front at an absolute density level.
struct DensityLevel {
  double level = 0.5;
};
using FrontLocator = std::variant<SignalLevel, DensityLevel>;

/// Rightmost crossing of the level, linearly interpolated between adjacent
/// cell centres. Empty when the level is not attained (e.g. uniform fields).
std::optional<double> front_position(const FieldState& state, const Grid1D& grid,
                                     const FrontLocator& locator = SignalLevel{0.5});

struct FrontSample {
  double t = 0.0;
  double x = 0.0;
};

struct FrontTrajectory {
  std::vector<FrontSample> samples;  // t strictly increasing
  std::string threshold_spec;        // how the front was located
};

struct SpeedFit {
  double c_fit = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

/// Least-squares slope of x_front against t over the trailing fraction of the
/// samples (by count). Throws InsufficientData below 10 samples in the window.
SpeedFit fit_speed(const FrontTrajectory& traj, double window_fraction = 0.5);

/// (rho, drho/dx) pairs per interior cell at a fixed time; in a frame moving
/// at c_used the x-derivative is the profile derivative.
struct PhasePortrait {
  std::vector<double> rho;
  std::vector<double> drho_dz;
  std::vector<std::uint8_t> near_interface;  // within 3 cells of the S_0 crossing
  double c_used = 0.0;
};

PhasePortrait phase_portrait(const FieldState& state, const Grid1D& grid, double c_used = 0.0,
                             std::optional<double> interface_S0 = std::nullopt);

struct MonitorSample {
  double t = 0.0;
  double mass = 0.0;
  double min_S = 0.0;
  double max_S = 0.0;
  double min_rho = 0.0;
};

MonitorSample monitor_state(const FieldState& state, const Grid1D& grid);
std::vector<MonitorSample> monitors(std::span<const FieldState> states, const Grid1D& grid);

}  // namespace sgg
