#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgg/model.hpp"

namespace sgg {

/// Thrown when a requested wave construction does not exist for the given
/// parameters (e.g. chi <= d for the mass-carried wave).
struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SpeedBranch {
  Direct,                // closed-form expression, no root finding
  ImplicitRoot,          // bracketed bisection on a monotone residual
  Pulled,                // linear-spreading speed 2 sqrt(r d)
  PushedChemotaxis,      // advection-dominated branch chi + r d / chi
  PushedBackConstraint,  // discriminant condition at the back of the wave
};
std::string to_string(SpeedBranch branch);

struct ConstraintRecord {
  std::string name;
  bool satisfied = true;
  double margin = 0.0;  // >= 0 when satisfied
};

struct SpeedResult {
  double c = 0.0;
  SpeedBranch branch = SpeedBranch::Direct;
  double residual = 0.0;
  std::vector<ConstraintRecord> constraints;
};

struct ProfileMeta {
  SpeedBranch branch = SpeedBranch::Direct;
  double a_prime = std::numeric_limits<double>::quiet_NaN();   // density normalization
  double a0 = std::numeric_limits<double>::quiet_NaN();        // attractant kernel factor
  double flux_J = std::numeric_limits<double>::quiet_NaN();    // back flux, plateau waves
  double rho_minus = std::numeric_limits<double>::quiet_NaN(); // density limit at -inf
  double S_minus = std::numeric_limits<double>::quiet_NaN();   // signal limit at -inf
  double S_init = std::numeric_limits<double>::quiet_NaN();    // signal limit at +inf
  double mass = std::numeric_limits<double>::quiet_NaN();
  double linear_b = std::numeric_limits<double>::quiet_NaN();  // z e^{-lambda z} factor at the critical case
  std::vector<double> interfaces;  // z locations where derivatives may jump
};

/// A sampled traveling wave in the moving frame z = x - c t.
struct WaveProfile {
  std::vector<double> z;
  std::vector<double> rho;
  std::vector<double> S;
  std::optional<std::vector<double>> A;
  double c = 0.0;
  ProfileMeta meta;
};

struct TwoSignalRates {
  double lambda_minus = 0.0;  // density rate behind the peak (signals aligned)
  double lambda_plus = 0.0;   // density rate ahead of the peak (signals competing)
  double mu_minus = 0.0;      // attractant kernel rates
  double mu_plus = 0.0;
  bool degenerate() const { return lambda_minus == 0.0 || lambda_plus == 0.0; }
};

/// Wave speed of the mass-carried wave: c = k M / S_init.
/// The speed depends only on the gradient-establishment budget, not on chi or d.
SpeedResult ks_speed(double k, double M, double S_init);

/// Closed-form profile of the mass-carried wave (D = 0, chi > d):
///   S(z)   = S_init (1 + e^{-c z / d})^{d/(d-chi)}
///   rho(z) = a' e^{-c z / d} (1 + e^{-c z / d})^{chi/(d-chi)}
/// with a' = M c / (chi - d) fixing the total mass to M.
WaveProfile ks_profile(double d, double chi, double k, double M, double S_init,
                       std::vector<double> z_grid);

/// Root of chi_S - c = chi_A c / sqrt(c^2 + 4 alpha D_A) on (0, chi_S).
SpeedResult two_signal_speed(double chi_S, double chi_A, double alpha, double D_A);

/// Exponential rates of the two-signal construction at speed c; checks the
/// closure identity lambda_- mu_- = lambda_+ mu_+ to 1e-9 relative.
TwoSignalRates two_signal_rates(double c, double chi_S, double chi_A, double d,
                                double alpha, double D_A);

/// Piecewise-exponential two-signal wave: rho normalized to mass M, A from the
/// closed-form convolution of the elliptic kernel with rho, S integrated in
/// the moving frame with the model's consumption kernel (requires D == 0).
WaveProfile two_signal_profile(const ModelSpec& spec, double S_init, double M,
                               std::vector<double> z_grid);

/// Speed dichotomy of the binary go-or-grow wave:
/// 2 sqrt(r d) when chi <= sqrt(r d), chi + r d / chi otherwise.
SpeedResult gogrow_speed(double chi, double r, double d);

/// Plateau wave of the binary go-or-grow model at speed c (from gogrow_speed):
/// constant rho_- = J/(c - chi) behind the threshold, exponential (or
/// z e^{-lambda z} at the critical case) decay ahead, rho(0) = 1. The signal
/// is rebuilt with the linear consumption kernel -k rho S from S(0) = S_0.
WaveProfile gogrow_profile(double chi, double r, double d, double c,
                           std::vector<double> z_grid, double k = 1.0, double S_0 = 1.0);

/// Speed of the logarithmic-sensitivity go-or-grow wave:
/// c = 2 sqrt(r max{d, chi log(S_init/S_0)}).
SpeedResult logsens_speed(double chi, double r, double d, double S_init, double S_0);

/// Back flux J = (r c / k) log(S_init/S_0); equals c^3/(4 k chi) exactly at
/// the back-constraint speed (vanishing discriminant).
double logsens_back_flux(double c, double r, double k, double S_init, double S_0);

/// Phase-plane curves (rho, rho') of the logarithmic go-or-grow wave.
struct PhaseCurves {
  double c = 0, d = 1, k = 1, chi = 1, J = 0, r = 0;
  double front_rate = 0;  // lambda = (c + sqrt(c^2 - 4 r d)) / (2 d)

  /// Leading-edge branch rho' = -lambda rho (z > 0).
  double front(double rho) const { return -front_rate * rho; }
  /// Back branch d rho' = -c rho + (k chi / c) rho^2 + J; a perfect square
  /// exactly when J cancels the discriminant.
  double back(double rho) const { return (-c * rho + (k * chi / c) * rho * rho + J) / d; }
  /// Vertex of the back parabola, rho* = c^2 / (2 k chi).
  double vertex() const { return c * c / (2.0 * k * chi); }
};
PhaseCurves logsens_phase_curves(double c, double d, double k, double chi, double J, double r);

/// Max grid residual of the moving-frame equations by central differences,
/// normalized per equation by the largest term magnitude over the grid.
/// Cells whose stencil touches the two cells adjacent to a declared interface
/// are excluded, as are the outermost stencil cells. Requires a uniform grid.
double residual_of_profile(const WaveProfile& profile, const ModelSpec& spec);

}  // namespace sgg
