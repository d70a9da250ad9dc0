#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgg {

enum class DomainKind { TruncatedLine, HalfLine };

/// Uniform cell-centred finite-volume grid on [x_min, x_max].
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 16;
  DomainKind domain_kind = DomainKind::TruncatedLine;

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int i) const { return x_min + (i + 0.5) * dx(); }
  std::vector<double> centers() const {
    std::vector<double> xs(n_cells);
    for (int i = 0; i < n_cells; ++i) xs[i] = center(i);
    return xs;
  }
  void validate() const {
    if (n_cells < 16) throw std::invalid_argument("grid needs at least 16 cells");
    if (!(x_max > x_min)) throw std::invalid_argument("grid extent must be positive");
  }
};

enum class SignalBCKind { NoFlux, Dirichlet };

struct SignalBC {
  SignalBCKind kind = SignalBCKind::NoFlux;
  double value = 0.0;  // Dirichlet only
};

/// Boundary conditions; the density is always no-flux on both sides.
struct BoundarySpec {
  SignalBC S_left;
  SignalBC S_right;

  void validate(const Grid1D& grid) const {
    if (grid.domain_kind == DomainKind::HalfLine) {
      if (S_left.kind != SignalBCKind::Dirichlet || !(S_left.value > 0.0)) {
        throw std::invalid_argument(
            "a half-line domain requires a positive Dirichlet signal value at the origin");
      }
    }
    if (S_left.kind == SignalBCKind::Dirichlet && !(S_left.value >= 0.0))
      throw std::invalid_argument("Dirichlet signal values must be >= 0");
    if (S_right.kind == SignalBCKind::Dirichlet && !(S_right.value >= 0.0))
      throw std::invalid_argument("Dirichlet signal values must be >= 0");
  }
};

/// Discretized fields at one time instant.
struct FieldState {
  double t = 0.0;
  std::vector<double> rho;
  std::vector<double> S;
  std::optional<std::vector<double>> A;
};

enum class BreakdownPolicy { Halt, ClampAndContinue };

struct SimConfig {
  double dt_max = 0.1;
  double cfl = 0.9;                      // safety factor in (0, 1]
  double t_end = 1.0;
  std::optional<double> clamp_epsilon;   // S <- max(S, eps) after each step
  double output_every = 0.5;
  BreakdownPolicy breakdown_policy = BreakdownPolicy::Halt;

  void validate() const {
    if (!(dt_max > 0.0)) throw std::invalid_argument("dt_max must be > 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
    if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be > 0");
    if (clamp_epsilon && !(*clamp_epsilon > 0.0))
      throw std::invalid_argument("clamp_epsilon must be > 0 when set");
    if (!(output_every > 0.0)) throw std::invalid_argument("output_every must be > 0");
  }
};

enum class BreakdownCause { NonpositiveSignal, NonfiniteValue };
std::string to_string(BreakdownCause cause);

struct BreakdownRecord {
  bool occurred = false;
  double t_break = 0.0;
  BreakdownCause cause = BreakdownCause::NonpositiveSignal;
  int location = -1;  // cell index
};

/// Thrown by the single-step entry point; run() records instead of throwing.
struct BreakdownError : std::runtime_error {
  BreakdownError(BreakdownCause cause_, int cell_, double t_)
      : std::runtime_error("numerical breakdown: " + to_string(cause_) + " at cell " +
                           std::to_string(cell_) + ", t = " + std::to_string(t_)),
        cause(cause_),
        cell(cell_),
        t(t_) {}
  BreakdownCause cause;
  int cell;
  double t;
};

inline std::string to_string(BreakdownCause cause) {
  switch (cause) {
    case BreakdownCause::NonpositiveSignal: return "nonpositive-signal";
    case BreakdownCause::NonfiniteValue: return "nonfinite-value";
  }
  return "unknown";
}

}  // namespace sgg
