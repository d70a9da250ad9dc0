#include "sgg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgg/numerics.hpp"

namespace sgg {

namespace {

constexpr double kSafety = 0.9;       // explicit source positivity margin
constexpr double kFallbackEps = 1e-12;  // clamp used by ClampAndContinue

struct StepWorkspace {
  std::vector<double> vel;       // n+1 face velocities
  std::vector<double> log_S;
  std::vector<double> rho_new;
  std::vector<double> S_new;
  std::vector<double> A_new;
  std::vector<double> diag, lower, upper;  // tridiagonal scratch
};

struct StepStatus {
  bool broke = false;
  BreakdownCause cause = BreakdownCause::NonpositiveSignal;
  int cell = -1;
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// (I - dt * coef * Lap) x = rhs with no-flux (reflecting) boundaries; the
// matrix rows sum to one, so the solve preserves the discrete total.
void implicit_diffusion_neumann(std::vector<double>& field, double theta, StepWorkspace& ws) {
  const std::size_t n = field.size();
  ws.lower.assign(n, -theta);
  ws.upper.assign(n, -theta);
  ws.diag.assign(n, 1.0 + 2.0 * theta);
  ws.diag[0] = 1.0 + theta;
  ws.diag[n - 1] = 1.0 + theta;
  solve_tridiagonal_inplace(ws.lower, ws.diag, ws.upper, field);
}

// Same operator with a Dirichlet ghost value on one or both sides
// (ghost = 2 g - interior, i.e. the boundary face holds the prescribed value).
void implicit_diffusion_signal(std::vector<double>& field, double theta, const BoundarySpec& bc,
                               StepWorkspace& ws) {
  const std::size_t n = field.size();
  ws.lower.assign(n, -theta);
  ws.upper.assign(n, -theta);
  ws.diag.assign(n, 1.0 + 2.0 * theta);
  if (bc.S_left.kind == SignalBCKind::Dirichlet) {
    ws.diag[0] = 1.0 + 3.0 * theta;
    field[0] += 2.0 * theta * bc.S_left.value;
  } else {
    ws.diag[0] = 1.0 + theta;
  }
  if (bc.S_right.kind == SignalBCKind::Dirichlet) {
    ws.diag[n - 1] = 1.0 + 3.0 * theta;
    field[n - 1] += 2.0 * theta * bc.S_right.value;
  } else {
    ws.diag[n - 1] = 1.0 + theta;
  }
  solve_tridiagonal_inplace(ws.lower, ws.diag, ws.upper, field);
}

// Face velocities for the whole grid. The logarithmic kinds get a dedicated
// loop that takes one log per cell instead of two per face; unit tests pin
// every path against model::advection_velocity.
void face_velocities(const FieldState& state, const ModelSpec& spec, double dx,
                     StepWorkspace& ws) {
  const std::size_t n = state.S.size();
  ws.vel.assign(n + 1, 0.0);  // boundary faces carry no advective flux
  auto& vel = ws.vel;

  const auto fill_log = [&] {
    ws.log_S.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(state.S[i] > 0.0)) {
        throw std::domain_error("logarithmic sensitivity sampled on non-positive S");
      }
      ws.log_S[i] = std::log(state.S[i]);
    }
  };

  if (const auto* lg = std::get_if<LogGradient>(&spec.sensitivity)) {
    fill_log();
    const double chi_dx = lg->chi / dx;
    for (std::size_t i = 1; i < n; ++i) {
      vel[i] = chi_dx * (ws.log_S[i] - ws.log_S[i - 1]);
    }
    return;
  }
  if (const auto* tl = std::get_if<ThresholdedLogGradient>(&spec.sensitivity)) {
    fill_log();
    const double chi_dx = tl->chi / dx;
    for (std::size_t i = 1; i < n; ++i) {
      const double raw = chi_dx * (ws.log_S[i] - ws.log_S[i - 1]);
      if (raw == 0.0) continue;
      const double S_up = raw > 0.0 ? state.S[i - 1] : state.S[i];
      vel[i] = S_up <= tl->S_0 ? raw : 0.0;
    }
    return;
  }
  if (const auto* ts = std::get_if<ThresholdedSign>(&spec.sensitivity)) {
    for (std::size_t i = 1; i < n; ++i) {
      const int sg = sign0(state.S[i] - state.S[i - 1]);
      if (sg == 0) continue;
      const double S_up = sg > 0 ? state.S[i - 1] : state.S[i];
      vel[i] = S_up <= ts->S_0 ? ts->chi * sg : 0.0;
    }
    return;
  }
  if (const auto* bs = std::get_if<BinaryTwoSignal>(&spec.sensitivity)) {
    if (bs->chi_A == 0.0) {
      for (std::size_t i = 1; i < n; ++i) {
        vel[i] = bs->chi_S * sign0(state.S[i] - state.S[i - 1]);
      }
    } else {
      // the run/step entry checks guarantee the attractant field here
      const auto& A = state.A.value();
      for (std::size_t i = 1; i < n; ++i) {
        vel[i] = bs->chi_S * sign0(state.S[i] - state.S[i - 1]) +
                 bs->chi_A * sign0(A[i] - A[i - 1]);
      }
    }
    return;
  }
  const bool need_A = spec.uses_attractant_gradient();
  for (std::size_t i = 1; i < n; ++i) {
    std::optional<double> Al, Ar;
    if (need_A && state.A) {
      Al = (*state.A)[i - 1];
      Ar = (*state.A)[i];
    }
    vel[i] = advection_velocity(spec, state.S[i - 1], state.S[i], Al, Ar, dx);
  }
}

double select_dt(const FieldState& state, const ModelSpec& spec, const SimConfig& config,
                 double dx, double vmax, double remaining) {
  double dt = std::min(config.dt_max, remaining);
  if (vmax > 0.0) dt = std::min(dt, config.cfl * dx / vmax);
  dt = std::min(dt, config.cfl * dx * dx / (2.0 * spec.d));
  // explicit-source positivity / boundedness bounds
  const bool s_dependent = !std::holds_alternative<ConstantConsumption>(spec.consumption);
  if (s_dependent) {
    double k = 0.0;
    if (const auto* lc = std::get_if<LinearConsumption>(&spec.consumption)) k = lc->k;
    if (const auto* pc = std::get_if<PowerConsumption>(&spec.consumption)) k = pc->k;
    const double rho_max = *std::max_element(state.rho.begin(), state.rho.end());
    if (k * rho_max > 0.0) dt = std::min(dt, kSafety / (k * rho_max));
  }
  if (const auto* g = std::get_if<ThresholdGrowth>(&spec.growth)) {
    dt = std::min(dt, kSafety / g->r);
  }
  if (spec.attractant) {
    dt = std::min(dt, kSafety / spec.attractant->alpha);
  }
  return dt;
}

// Advances the state by one step in place. Returns the breakdown status; the
// advanced (possibly broken) state stays committed so callers can inspect it.
StepStatus advance(FieldState& state, const ModelSpec& spec, const Grid1D& grid,
                   const BoundarySpec& bc, const SimConfig& config, double remaining,
                   StepWorkspace& ws) {
  const int n = grid.n_cells;
  const double dx = grid.dx();

  // an active clamp also guards the incoming state, so the first step from
  // degenerate data does not trip the logarithmic kinds
  if (config.clamp_epsilon) {
    for (double& s : state.S) s = std::max(s, *config.clamp_epsilon);
  }

  StepStatus status;
  try {
    face_velocities(state, spec, dx, ws);
  } catch (const std::domain_error&) {
    status.broke = true;
    status.cause = BreakdownCause::NonpositiveSignal;
    int loc = 0;
    for (int i = 0; i < n; ++i) {
      if (state.S[i] <= state.S[loc]) loc = i;
    }
    status.cell = loc;
    return status;
  }
  const double vmax = max_abs(ws.vel);
  const double dt = select_dt(state, spec, config, dx, vmax, remaining);

  // explicit first-order upwind advection, conservative form
  ws.rho_new = state.rho;
  for (int f = 1; f < n; ++f) {
    const double v = ws.vel[f];
    const double flux = v > 0.0 ? v * state.rho[f - 1] : v * state.rho[f];
    const double q = dt / dx * flux;
    ws.rho_new[f - 1] -= q;
    ws.rho_new[f] += q;
  }

  // implicit cell diffusion
  implicit_diffusion_neumann(ws.rho_new, dt * spec.d / (dx * dx), ws);

  // explicit growth
  if (std::holds_alternative<ThresholdGrowth>(spec.growth)) {
    for (int i = 0; i < n; ++i) {
      ws.rho_new[i] *= 1.0 + dt * reaction_rate(spec, state.S[i]);
    }
  }

  // signal: explicit consumption on the pre-step density, then implicit diffusion
  ws.S_new = state.S;
  for (int i = 0; i < n; ++i) {
    ws.S_new[i] -= dt * consumption_rate(spec, state.S[i], state.rho[i]);
  }
  if (spec.D > 0.0) {
    implicit_diffusion_signal(ws.S_new, dt * spec.D / (dx * dx), bc, ws);
  }

  // attractant: explicit source/sink on pre-step fields, implicit diffusion
  const bool has_A = spec.attractant && state.A;
  if (has_A) {
    const auto& att = *spec.attractant;
    ws.A_new = *state.A;
    for (int i = 0; i < n; ++i) {
      ws.A_new[i] += dt * (att.beta * state.rho[i] - att.alpha * ws.A_new[i]);
    }
    implicit_diffusion_neumann(ws.A_new, dt * att.D_A / (dx * dx), ws);
  }

  if (config.clamp_epsilon) {
    for (double& s : ws.S_new) s = std::max(s, *config.clamp_epsilon);
  } else {
    for (int i = 0; i < n; ++i) {
      if (ws.S_new[i] <= 0.0) {
        status.broke = true;
        status.cause = BreakdownCause::NonpositiveSignal;
        status.cell = i;
        break;
      }
    }
  }
  for (int i = 0; i < n && !status.broke; ++i) {
    if (!std::isfinite(ws.rho_new[i]) || !std::isfinite(ws.S_new[i]) ||
        (has_A && !std::isfinite(ws.A_new[i]))) {
      status.broke = true;
      status.cause = BreakdownCause::NonfiniteValue;
      status.cell = i;
    }
  }

  state.rho.swap(ws.rho_new);
  state.S.swap(ws.S_new);
  if (has_A) state.A->swap(ws.A_new);
  state.t += dt;
  return status;
}

void check_state_matches(const FieldState& state, const ModelSpec& spec, const Grid1D& grid) {
  if (static_cast<int>(state.rho.size()) != grid.n_cells ||
      static_cast<int>(state.S.size()) != grid.n_cells) {
    throw std::invalid_argument("state arrays must match the grid");
  }
  if (spec.uses_attractant_gradient() &&
      (!state.A || static_cast<int>(state.A->size()) != grid.n_cells)) {
    throw std::invalid_argument("two-signal model needs an attractant field on the grid");
  }
}

}  // namespace

FieldState initial_condition(const InitKind& kind, const Grid1D& grid, double S_init) {
  grid.validate();
  const int n = grid.n_cells;
  FieldState state;
  state.t = 0.0;
  state.rho.assign(n, 0.0);
  state.S.assign(n, S_init);

  struct Builder {
    FieldState& st;
    const Grid1D& grid;
    double S_init;

    void operator()(const GaussianInit& g) {
      if (!(g.mass > 0.0)) throw std::domain_error("initial mass must be > 0");
      if (!(g.width > 0.0)) throw std::domain_error("initial width must be > 0");
      const double norm = g.mass / (g.width * std::sqrt(2.0 * std::numbers::pi));
      for (int i = 0; i < grid.n_cells; ++i) {
        const double u = (grid.center(i) - g.center) / g.width;
        st.rho[i] = norm * std::exp(-0.5 * u * u);
      }
    }
    void operator()(const HalfGaussianInit& g) {
      if (!(g.mass > 0.0)) throw std::domain_error("initial mass must be > 0");
      if (!(g.width > 0.0)) throw std::domain_error("initial width must be > 0");
      const double norm = 2.0 * g.mass / (g.width * std::sqrt(2.0 * std::numbers::pi));
      for (int i = 0; i < grid.n_cells; ++i) {
        const double u = (grid.center(i) - grid.x_min) / g.width;
        st.rho[i] = norm * std::exp(-0.5 * u * u);
      }
    }
    void operator()(const PlateauInit& p) {
      if (!(p.height > 0.0)) throw std::domain_error("plateau height must be > 0");
      for (int i = 0; i < grid.n_cells; ++i) {
        st.rho[i] = grid.center(i) < p.edge ? p.height : 0.0;
      }
    }
    void operator()(const FromProfileInit& f) {
      const auto& p = f.profile;
      for (int i = 0; i < grid.n_cells; ++i) {
        const double z = grid.center(i) - f.offset;
        st.rho[i] = interp_linear(p.z, p.rho, z);
        st.S[i] = interp_linear(p.z, p.S, z);
      }
      if (p.A) {
        st.A = std::vector<double>(grid.n_cells);
        for (int i = 0; i < grid.n_cells; ++i) {
          (*st.A)[i] = interp_linear(p.z, *p.A, grid.center(i) - f.offset);
        }
      }
    }
    void operator()(const CustomInit& c) {
      if (static_cast<int>(c.rho.size()) != grid.n_cells) {
        throw std::domain_error("custom density must provide one value per cell");
      }
      st.rho = c.rho;
      if (c.S) {
        if (static_cast<int>(c.S->size()) != grid.n_cells) {
          throw std::domain_error("custom signal must provide one value per cell");
        }
        st.S = *c.S;
      }
    }
  };
  std::visit(Builder{state, grid, S_init}, kind);
  return state;
}

FieldState step(const FieldState& state, const ModelSpec& spec, const Grid1D& grid,
                const BoundarySpec& bc, const SimConfig& config) {
  spec.validate();
  grid.validate();
  bc.validate(grid);
  config.validate();
  FieldState next = state;
  if (spec.attractant && !next.A) {
    next.A = std::vector<double>(grid.n_cells, 0.0);
  }
  check_state_matches(next, spec, grid);
  StepWorkspace ws;
  const StepStatus status =
      advance(next, spec, grid, bc, config, std::numeric_limits<double>::infinity(), ws);
  if (status.broke) {
    throw BreakdownError(status.cause, status.cell, next.t);
  }
  return next;
}

std::pair<FieldState, RunReport> run(FieldState init, const ModelSpec& spec, const Grid1D& grid,
                                     const BoundarySpec& bc, const SimConfig& config) {
  spec.validate();
  grid.validate();
  bc.validate(grid);
  config.validate();

  FieldState state = std::move(init);
  if (spec.attractant && !state.A) {
    state.A = std::vector<double>(grid.n_cells, 0.0);
  }
  check_state_matches(state, spec, grid);
  if (config.clamp_epsilon) {
    for (double& s : state.S) s = std::max(s, *config.clamp_epsilon);
  }

  RunReport report;
  report.scheme.x_min = grid.x_min;
  report.scheme.x_max = grid.x_max;
  report.scheme.dx = grid.dx();
  report.scheme.n_cells = grid.n_cells;
  report.scheme.dt_max = config.dt_max;
  report.scheme.cfl = config.cfl;
  report.scheme.t_end = config.t_end;
  report.scheme.output_every = config.output_every;
  report.scheme.clamp_epsilon = config.clamp_epsilon;
  report.front.threshold_spec = "signal-level 0.5";

  const double guard_x = grid.x_max - 10.0 * grid.dx();
  const auto record = [&](const FieldState& s) {
    report.snapshots.push_back(s);
    report.monitor_series.push_back(monitor_state(s, grid));
    if (const auto x = front_position(s, grid)) {
      report.front.samples.push_back({s.t, *x});
      if (*x >= guard_x) report.invalidated = true;
    }
  };

  // initial state may already violate positivity (no clamp): report at t = 0
  bool broke = false;
  if (!config.clamp_epsilon) {
    for (int i = 0; i < grid.n_cells; ++i) {
      if (state.S[i] <= 0.0) {
        report.breakdown = {true, state.t, BreakdownCause::NonpositiveSignal, i};
        broke = true;
        break;
      }
    }
  }
  record(state);

  StepWorkspace ws;
  double next_output = config.output_every;
  while (!broke && state.t < config.t_end) {
    const double remaining = config.t_end - state.t;
    const StepStatus status = advance(state, spec, grid, bc, config, remaining, ws);
    ++report.n_steps;
    if (status.broke) {
      const bool halt = status.cause == BreakdownCause::NonfiniteValue ||
                        config.breakdown_policy == BreakdownPolicy::Halt;
      if (!report.breakdown.occurred) {
        report.breakdown = {true, state.t, status.cause, status.cell};
      }
      if (halt) {
        record(state);
        broke = true;
        break;
      }
      // ClampAndContinue: floor the signal and keep going
      for (double& s : state.S) s = std::max(s, kFallbackEps);
    }
    if (state.t + 1e-12 >= next_output || state.t >= config.t_end) {
      record(state);
      while (next_output <= state.t + 1e-12) next_output += config.output_every;
    }
  }
  report.t_final = state.t;

  if (report.front.samples.size() >= 20) {
    report.fit = fit_speed(report.front);
  }
  return {std::move(state), std::move(report)};
}

}  // namespace sgg
