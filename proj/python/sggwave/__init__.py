"""Traveling waves of cells in self-generated chemical gradients.

Closed-form wave constructions and speed formulas for the Keller-Segel model
and its two-signal and go-or-grow extensions, plus a finite-volume simulator.
"""

from ._core import (
    BreakdownError,
    ConfigError,
    ConstraintRecord,
    ConstructionError,
    ModelSpec,
    PhaseCurves,
    ScenarioPreset,
    SpeedResult,
    TwoSignalRates,
    WaveProfile,
    __version__,
    advection_velocity,
    consumption_rate,
    gogrow_profile,
    gogrow_speed,
    ks_profile,
    ks_speed,
    logsens_back_flux,
    logsens_phase_curves,
    logsens_speed,
    parse_config,
    preset,
    preset_names,
    reaction_rate,
    residual_of_profile,
    run_config,
    run_preset,
    serialize_config,
    two_signal_profile,
    two_signal_rates,
    two_signal_speed,
)

__all__ = [
    "BreakdownError",
    "ConfigError",
    "ConstraintRecord",
    "ConstructionError",
    "ModelSpec",
    "PhaseCurves",
    "ScenarioPreset",
    "SpeedResult",
    "TwoSignalRates",
    "WaveProfile",
    "__version__",
    "advection_velocity",
    "consumption_rate",
    "gogrow_profile",
    "gogrow_speed",
    "ks_profile",
    "ks_speed",
    "logsens_back_flux",
    "logsens_phase_curves",
    "logsens_speed",
    "parse_config",
    "preset",
    "preset_names",
    "reaction_rate",
    "residual_of_profile",
    "run_config",
    "run_preset",
    "serialize_config",
    "two_signal_profile",
    "two_signal_rates",
    "two_signal_speed",
]
