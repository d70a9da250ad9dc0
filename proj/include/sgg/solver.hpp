#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "sgg/analytic.hpp"
#include "sgg/diagnostics.hpp"
#include "sgg/model.hpp"
#include "sgg/state.hpp"

namespace sgg {

// Initial-condition kinds (cell-centred sampling; S uniform at S_init unless
// the kind supplies its own signal).
struct GaussianInit {
  double center = 0.0;
  double width = 1.0;
  double mass = 1.0;
};
struct HalfGaussianInit {  // anchored at the left boundary
  double width = 1.0;
  double mass = 1.0;
};
struct PlateauInit {
  double edge = 1.0;
  double height = 1.0;
};
struct FromProfileInit {
  WaveProfile profile;
  double offset = 0.0;  // x position of the profile's z = 0
};
struct CustomInit {
  std::vector<double> rho;
  std::optional<std::vector<double>> S;  // uniform S_init when absent
};
using InitKind =
    std::variant<GaussianInit, HalfGaussianInit, PlateauInit, FromProfileInit, CustomInit>;

FieldState initial_condition(const InitKind& kind, const Grid1D& grid, double S_init);

/// Scheme parameters echoed for reproducibility.
struct SchemeRecord {
  double x_min = 0.0, x_max = 0.0, dx = 0.0;
  int n_cells = 0;
  double dt_max = 0.0, cfl = 0.0, t_end = 0.0, output_every = 0.0;
  std::optional<double> clamp_epsilon;
};

struct RunReport {
  SchemeRecord scheme;
  BreakdownRecord breakdown;
  bool invalidated = false;  // front reached within 10 dx of the right boundary
  FrontTrajectory front;
  std::vector<MonitorSample> monitor_series;
  std::optional<SpeedFit> fit;  // trailing-half fit when enough samples exist
  std::vector<FieldState> snapshots;
  long long n_steps = 0;
  double t_final = 0.0;
};

/// One time step of the semi-implicit upwind scheme. The step size is
/// min(dt_max, cfl dx / max|v|, cfl dx^2 / (2 d)) further bounded by
/// 0.9/(k max rho) for S-dependent consumption, 0.9/r for growth and
/// 0.9/alpha for the attractant sink. Update order: rho advection (explicit
/// upwind), rho diffusion (implicit), growth (explicit), then S (explicit
/// consumption on the pre-step density + implicit diffusion), then A.
/// Mass is conserved exactly without growth. Throws BreakdownError when the
/// signal turns non-positive without a clamp, or on non-finite values.
FieldState step(const FieldState& state, const ModelSpec& spec, const Grid1D& grid,
                const BoundarySpec& bc, const SimConfig& config);

/// Iterate step() until t_end or breakdown, recording snapshots, the front
/// trajectory and conservation monitors every output_every.
std::pair<FieldState, RunReport> run(FieldState init, const ModelSpec& spec, const Grid1D& grid,
                                     const BoundarySpec& bc, const SimConfig& config);

}  // namespace sgg
