#include "sgg/model.hpp"

#include <cmath>
#include <stdexcept>

#include "sgg/numerics.hpp"

namespace sgg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive_signal(double S, const char* side) {
  if (!(S > 0.0)) {
    throw std::domain_error(std::string("logarithmic sensitivity sampled on non-positive S at the ") +
                            side + " cell of the face");
  }
}

}  // namespace

void ModelSpec::validate() const {
  std::visit(overloaded{
                 [](const LogGradient& s) {
                   if (s.chi < 0.0) throw std::invalid_argument("chi must be >= 0");
                 },
                 [](const BinaryTwoSignal& s) {
                   if (s.chi_S < 0.0 || s.chi_A < 0.0)
                     throw std::invalid_argument("chi_S and chi_A must be >= 0");
                 },
                 [](const TanhSensitivity& s) {
                   if (s.chi < 0.0) throw std::invalid_argument("chi must be >= 0");
                   if (!(s.f_scale > 0.0)) throw std::invalid_argument("f_scale must be > 0");
                 },
                 [](const ThresholdedSign& s) {
                   if (s.chi < 0.0) throw std::invalid_argument("chi must be >= 0");
                   if (!(s.S_0 > 0.0)) throw std::invalid_argument("S_0 must be > 0");
                 },
                 [](const ThresholdedLogGradient& s) {
                   if (s.chi < 0.0) throw std::invalid_argument("chi must be >= 0");
                   if (!(s.S_0 > 0.0)) throw std::invalid_argument("S_0 must be > 0");
                 },
             },
             sensitivity);
  std::visit(overloaded{
                 [](const ConstantConsumption& c) {
                   if (!(c.k > 0.0)) throw std::invalid_argument("consumption rate k must be > 0");
                 },
                 [](const LinearConsumption& c) {
                   if (!(c.k > 0.0)) throw std::invalid_argument("consumption rate k must be > 0");
                 },
                 [](const PowerConsumption& c) {
                   if (!(c.k > 0.0)) throw std::invalid_argument("consumption rate k must be > 0");
                   if (!(c.m > 0.0 && c.m <= 1.0))
                     throw std::invalid_argument("consumption exponent m must lie in (0, 1]");
                 },
             },
             consumption);
  if (const auto* g = std::get_if<ThresholdGrowth>(&growth)) {
    if (!(g->r > 0.0)) throw std::invalid_argument("growth rate r must be > 0");
    if (!(g->S_0 > 0.0)) throw std::invalid_argument("growth threshold S_0 must be > 0");
    // the models carry a single threshold; a mismatch is a configuration bug
    if (const auto* s = std::get_if<ThresholdedSign>(&sensitivity)) {
      if (s->S_0 != g->S_0)
        throw std::invalid_argument("sensitivity and growth thresholds must be equal");
    }
    if (const auto* s = std::get_if<ThresholdedLogGradient>(&sensitivity)) {
      if (s->S_0 != g->S_0)
        throw std::invalid_argument("sensitivity and growth thresholds must be equal");
    }
  }
  if (!(d > 0.0)) throw std::invalid_argument("cell diffusivity d must be > 0");
  if (D < 0.0) throw std::invalid_argument("signal diffusivity D must be >= 0");
  if (attractant) {
    if (!(attractant->D_A > 0.0)) throw std::invalid_argument("attractant D_A must be > 0");
    if (!(attractant->alpha > 0.0)) throw std::invalid_argument("attractant alpha must be > 0");
    if (!(attractant->beta > 0.0)) throw std::invalid_argument("attractant beta must be > 0");
    if (!std::holds_alternative<BinaryTwoSignal>(sensitivity))
      throw std::invalid_argument("an attractant field requires the two-signal sensitivity");
  }
}

bool ModelSpec::needs_positive_signal() const {
  return std::holds_alternative<LogGradient>(sensitivity) ||
         std::holds_alternative<ThresholdedLogGradient>(sensitivity);
}

bool ModelSpec::uses_attractant_gradient() const {
  const auto* s = std::get_if<BinaryTwoSignal>(&sensitivity);
  return s != nullptr && s->chi_A != 0.0;
}

std::optional<double> ModelSpec::threshold() const {
  if (const auto* s = std::get_if<ThresholdedSign>(&sensitivity)) return s->S_0;
  if (const auto* s = std::get_if<ThresholdedLogGradient>(&sensitivity)) return s->S_0;
  if (const auto* g = std::get_if<ThresholdGrowth>(&growth)) return g->S_0;
  return std::nullopt;
}

double advection_velocity(const ModelSpec& spec, double S_left, double S_right,
                          std::optional<double> A_left, std::optional<double> A_right,
                          double dx) {
  if (!(dx > 0.0)) throw std::domain_error("advection_velocity: dx must be > 0");
  return std::visit(
      overloaded{
          [&](const LogGradient& s) {
            require_positive_signal(S_left, "left");
            require_positive_signal(S_right, "right");
            return s.chi * (std::log(S_right) - std::log(S_left)) / dx;
          },
          [&](const BinaryTwoSignal& s) {
            double v = s.chi_S * sign0(S_right - S_left);
            if (s.chi_A != 0.0) {
              if (!A_left || !A_right)
                throw std::domain_error("two-signal sensitivity with chi_A > 0 needs A values");
              v += s.chi_A * sign0(*A_right - *A_left);
            }
            return v;
          },
          [&](const TanhSensitivity& s) {
            const double S_face = 0.5 * (S_left + S_right);
            const double f = s.f_scale / ((1.0 + S_face) * (1.0 + S_face));
            return s.chi * std::tanh(f * (S_right - S_left) / dx);
          },
          [&](const ThresholdedSign& s) {
            const int sg = sign0(S_right - S_left);
            if (sg == 0) return 0.0;
            const double S_up = sg > 0 ? S_left : S_right;
            return S_up <= s.S_0 ? s.chi * sg : 0.0;
          },
          [&](const ThresholdedLogGradient& s) {
            require_positive_signal(S_left, "left");
            require_positive_signal(S_right, "right");
            const double raw = s.chi * (std::log(S_right) - std::log(S_left)) / dx;
            if (raw == 0.0) return 0.0;
            const double S_up = raw > 0.0 ? S_left : S_right;
            return S_up <= s.S_0 ? raw : 0.0;
          },
      },
      spec.sensitivity);
}

double reaction_rate(const ModelSpec& spec, double S) {
  if (const auto* g = std::get_if<ThresholdGrowth>(&spec.growth)) {
    return S > g->S_0 ? g->r : 0.0;
  }
  return 0.0;
}

double consumption_rate(const ModelSpec& spec, double S, double rho) {
  const double S_pos = S > 0.0 ? S : 0.0;
  return std::visit(overloaded{
                        [&](const ConstantConsumption& c) { return c.k * rho; },
                        [&](const LinearConsumption& c) { return c.k * rho * S_pos; },
                        [&](const PowerConsumption& c) { return c.k * rho * std::pow(S_pos, c.m); },
                    },
                    spec.consumption);
}

std::string sensitivity_name(const SensitivityKind& kind) {
  struct Namer {
    std::string operator()(const LogGradient&) const { return "log-gradient"; }
    std::string operator()(const BinaryTwoSignal&) const { return "two-signal"; }
    std::string operator()(const TanhSensitivity&) const { return "tanh"; }
    std::string operator()(const ThresholdedSign&) const { return "threshold-sign"; }
    std::string operator()(const ThresholdedLogGradient&) const { return "threshold-log"; }
  };
  return std::visit(Namer{}, kind);
}

std::string consumption_name(const ConsumptionKind& kind) {
  struct Namer {
    std::string operator()(const ConstantConsumption&) const { return "constant"; }
    std::string operator()(const LinearConsumption&) const { return "linear"; }
    std::string operator()(const PowerConsumption&) const { return "power"; }
  };
  return std::visit(Namer{}, kind);
}

std::string growth_name(const GrowthKind& kind) {
  struct Namer {
    std::string operator()(const NoGrowth&) const { return "none"; }
    std::string operator()(const ThresholdGrowth&) const { return "threshold"; }
  };
  return std::visit(Namer{}, kind);
}

}  // namespace sgg
