#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sgg/analytic.hpp"
#include "sgg/model.hpp"
#include "sgg/solver.hpp"
#include "sgg/state.hpp"

namespace sgg {

/// Parse or semantic failure in the configuration format. `line` is 0 for
/// errors that do not point at a single line.
struct ConfigError : std::runtime_error {
  ConfigError(int line_, const std::string& what_)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
        line(line_) {}
  int line = 0;
};

enum class OutcomeTag { Breakdown, Rescued, StationarySpike, TravelingWave };
std::string to_string(OutcomeTag tag);

/// Initial condition resolved lazily: profile-backed kinds regenerate their
/// closed form on the preset's grid when the state is built.
struct FromProfileDesc {
  std::string profile;  // "ks" | "two-signal" | "gogrow"
  double mass = 1.0;
  std::optional<double> offset;  // default: x_min + span / 3
};
/// Closed-form stationary spike on the half-line (zero-flux equilibrium of
/// the log-gradient model with constant consumption), lowered to per-cell
/// samples of rho and S.
struct SpikeDesc {
  double mass = 1.0;
};
using InitDesc = std::variant<GaussianInit, HalfGaussianInit, PlateauInit, FromProfileDesc,
                              CustomInit, SpikeDesc>;

struct ScenarioPreset {
  std::string name = "custom";
  ModelSpec model;
  Grid1D grid;
  BoundarySpec bc;
  InitDesc init = GaussianInit{};
  double s_init = 1.0;
  SimConfig config;
  std::optional<OutcomeTag> expected;
  std::optional<SpeedResult> expected_speed;  // recomputed from the model, never stored
};

/// Named presets:
///   ks-breakdown, ks-aligned, ks-rescued, spike-stable, spike-breakdown,
///   two-signal, gogrow, logsens, logsens-D1.
ScenarioPreset preset(const std::string& name);
std::vector<std::string> preset_names();

/// Flat INI-style sections ([scenario], [model], [grid], [boundary], [init],
/// [run]) with `key = value` lines and `#` comments. Unknown keys are
/// rejected with their line number; invariants of the contained types are
/// checked after assembly.
ScenarioPreset parse_config(const std::string& text);
std::string serialize_config(const ScenarioPreset& preset);

/// Build the initial fields, resolving profile-backed descriptors.
FieldState build_initial_state(const ScenarioPreset& preset);

/// The analytic wave speed for the preset's model family, when one exists
/// (e.g. none for the logarithmic go-or-grow model with D > 0).
std::optional<SpeedResult> analytic_speed(const ScenarioPreset& preset);

/// Mutate one scalar parameter through a dotted path such as "model.chi" or
/// "init.s_init"; used by sweeps. Throws ConfigError for unknown paths or a
/// path that does not apply to the preset's kinds.
void set_parameter(ScenarioPreset& preset, const std::string& path, double value);
std::vector<std::string> parameter_paths();

}  // namespace sgg
