#include "sgg/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sgg/numerics.hpp"

namespace sgg {

namespace {

std::optional<double> rightmost_crossing(const std::vector<double>& field, const Grid1D& grid,
                                         double level) {
  const int n = static_cast<int>(field.size());
  for (int i = n - 2; i >= 0; --i) {
    const double a = field[i] - level;
    const double b = field[i + 1] - level;
    if (a == 0.0 && b == 0.0) continue;  // plateau exactly at the level
    if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
      const double w = a / (a - b);
      return grid.center(i) + w * grid.dx();
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> front_position(const FieldState& state, const Grid1D& grid,
                                     const FrontLocator& locator) {
  if (static_cast<int>(state.S.size()) != grid.n_cells ||
      static_cast<int>(state.rho.size()) != grid.n_cells) {
    throw std::invalid_argument("front_position: state does not match the grid");
  }
  if (const auto* sl = std::get_if<SignalLevel>(&locator)) {
    if (!(sl->fraction > 0.0 && sl->fraction < 1.0)) {
      throw std::invalid_argument("front_position: fraction must lie in (0, 1)");
    }
    const auto [mn, mx] = std::minmax_element(state.S.begin(), state.S.end());
    if (*mx <= *mn) return std::nullopt;
    const double level = *mn + sl->fraction * (*mx - *mn);
    return rightmost_crossing(state.S, grid, level);
  }
  const auto& dl = std::get<DensityLevel>(locator);
  return rightmost_crossing(state.rho, grid, dl.level);
}

SpeedFit fit_speed(const FrontTrajectory& traj, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw std::invalid_argument("fit_speed: window_fraction must lie in (0, 1]");
  }
  const std::size_t n = traj.samples.size();
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(window_fraction * static_cast<double>(n)));
  if (keep < 10) {
    throw InsufficientData("fit_speed: fewer than 10 samples in the fit window");
  }
  const std::size_t first = n - keep;
  std::vector<double> t(keep), x(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    t[i] = traj.samples[first + i].t;
    x[i] = traj.samples[first + i].x;
  }
  const LineFit fit = fit_line(t, x);
  SpeedFit out;
  out.c_fit = fit.slope;
  out.r_squared = fit.r_squared;
  out.t_lo = t.front();
  out.t_hi = t.back();
  return out;
}

PhasePortrait phase_portrait(const FieldState& state, const Grid1D& grid, double c_used,
                             std::optional<double> interface_S0) {
  const int n = grid.n_cells;
  if (static_cast<int>(state.rho.size()) != n) {
    throw std::invalid_argument("phase_portrait: state does not match the grid");
  }
  PhasePortrait out;
  out.c_used = c_used;
  if (n < 3) return out;
  const double dx = grid.dx();

  int interface_cell = -1;
  if (interface_S0) {
    for (int i = n - 2; i >= 0; --i) {
      const double a = state.S[i] - *interface_S0;
      const double b = state.S[i + 1] - *interface_S0;
      if ((a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)) {
        if (a != 0.0 || b != 0.0) {
          interface_cell = i;
          break;
        }
      }
    }
  }

  out.rho.reserve(n - 2);
  out.drho_dz.reserve(n - 2);
  out.near_interface.reserve(n - 2);
  for (int i = 1; i + 1 < n; ++i) {
    out.rho.push_back(state.rho[i]);
    out.drho_dz.push_back((state.rho[i + 1] - state.rho[i - 1]) / (2.0 * dx));
    const bool near = interface_cell >= 0 && std::abs(i - interface_cell) <= 3;
    out.near_interface.push_back(near ? 1 : 0);
  }
  return out;
}

MonitorSample monitor_state(const FieldState& state, const Grid1D& grid) {
  MonitorSample m;
  m.t = state.t;
  const double dx = grid.dx();
  double mass = 0.0;
  for (double v : state.rho) mass += v;
  m.mass = mass * dx;
  const auto [mn_s, mx_s] = std::minmax_element(state.S.begin(), state.S.end());
  m.min_S = *mn_s;
  m.max_S = *mx_s;
  m.min_rho = *std::min_element(state.rho.begin(), state.rho.end());
  return m;
}

std::vector<MonitorSample> monitors(std::span<const FieldState> states, const Grid1D& grid) {
  std::vector<MonitorSample> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(monitor_state(s, grid));
  return out;
}

}  // namespace sgg
