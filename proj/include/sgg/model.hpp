#pragma once

#include <optional>
#include <string>
#include <variant>

namespace sgg {

// Chemotactic sensitivity kinds. Each one maps a local signal configuration
// (cell-centred values on both sides of a face, optionally for a second
// attractant A) to a face advection velocity.

/// chi * d(log S)/dx, the classical Weber-Fechner response. chi in length^2/time.
struct LogGradient {
  double chi = 0.0;
};

/// chi_S * sign(dS/dx) + chi_A * sign(dA/dx). Both coefficients in length/time.
struct BinaryTwoSignal {
  double chi_S = 0.0;
  double chi_A = 0.0;
};

/// chi * tanh(f(S) * dS/dx) with the decreasing family f(S) = f_scale/(1+S)^2.
/// f is evaluated on the face-averaged signal; f_scale -> infinity recovers
/// the binary response.
struct TanhSensitivity {
  double chi = 0.0;
  double f_scale = 1.0;
};

/// chi * sign(dS/dx) restricted to the migrating state S <= S_0.
struct ThresholdedSign {
  double chi = 0.0;
  double S_0 = 1.0;
};

/// chi * d(log S)/dx restricted to the migrating state S <= S_0.
struct ThresholdedLogGradient {
  double chi = 0.0;
  double S_0 = 1.0;
};

using SensitivityKind = std::variant<LogGradient, BinaryTwoSignal, TanhSensitivity,
                                     ThresholdedSign, ThresholdedLogGradient>;

// Consumption kinds, the uptake term -k(S, rho) of the signal equation.
struct ConstantConsumption {
  double k = 1.0;  // -k rho; blind to S, can drive S negative
};
struct LinearConsumption {
  double k = 1.0;  // -k rho S; shuts off as S -> 0
};
struct PowerConsumption {
  double k = 1.0;  // -k rho S^m, m in (0, 1]
  double m = 1.0;
};
using ConsumptionKind = std::variant<ConstantConsumption, LinearConsumption, PowerConsumption>;

// Growth kinds.
struct NoGrowth {};
struct ThresholdGrowth {
  double r = 1.0;   // division rate above the signal threshold
  double S_0 = 1.0; // shared with the sensitivity threshold when both exist
};
using GrowthKind = std::variant<NoGrowth, ThresholdGrowth>;

/// Secreted attractant block of the two-signal model:
/// dA/dt = D_A A_xx + beta rho - alpha A.
struct AttractantSpec {
  double D_A = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Full parameterization of the PDE family
///   rho_t + (-d rho_x + rho * chi(S, S_x, A, A_x))_x = r(S) rho
///   S_t = D S_xx - k(S, rho)
/// plus the optional attractant equation.
struct ModelSpec {
  SensitivityKind sensitivity = LogGradient{};
  ConsumptionKind consumption = ConstantConsumption{};
  GrowthKind growth = NoGrowth{};
  double d = 1.0;  // cell diffusivity
  double D = 0.0;  // signal diffusivity
  std::optional<AttractantSpec> attractant;

  /// Throws std::invalid_argument on an inconsistent parameter set.
  void validate() const;

  /// True for the logarithmic kinds, which require S > 0 where sampled.
  bool needs_positive_signal() const;

  /// True when the sensitivity reads the attractant gradient (chi_A != 0).
  bool uses_attractant_gradient() const;

  /// Threshold shared by sensitivity and/or growth, when any.
  std::optional<double> threshold() const;
};

/// Face advection velocity from the discrete gradient (S_right - S_left)/dx
/// (and analogously for A). sign(0) is 0: a flat gradient produces no bias.
/// Logarithmic kinds difference log of the cell-centred values and throw
/// std::domain_error naming the offending side when S <= 0 there.
/// Threshold kinds evaluate the indicator on the upwind cell's S, with
/// S == S_0 assigned to the migrating (advecting) state.
double advection_velocity(const ModelSpec& spec, double S_left, double S_right,
                          std::optional<double> A_left, std::optional<double> A_right,
                          double dx);

/// r(S): 0 for NoGrowth, r * 1_{S > S_0} otherwise (exactly S_0 does not divide).
double reaction_rate(const ModelSpec& spec, double S);

/// k(S, rho) >= 0. Negative S is treated as 0 for the S-dependent kinds.
double consumption_rate(const ModelSpec& spec, double S, double rho);

std::string sensitivity_name(const SensitivityKind& kind);
std::string consumption_name(const ConsumptionKind& kind);
std::string growth_name(const GrowthKind& kind);

}  // namespace sgg
