#include "sgg/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "sgg/numerics.hpp"

namespace sgg {

namespace {

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::domain_error(std::string(name) + " must be > 0");
  }
}

void check_grid(const std::vector<double>& z) {
  if (z.size() < 2) throw std::invalid_argument("z_grid needs at least two samples");
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (!(z[i] > z[i - 1])) throw std::invalid_argument("z_grid must be strictly increasing");
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(SpeedBranch branch) {
  switch (branch) {
    case SpeedBranch::Direct: return "direct";
    case SpeedBranch::ImplicitRoot: return "implicit-root";
    case SpeedBranch::Pulled: return "pulled";
    case SpeedBranch::PushedChemotaxis: return "pushed-chemotaxis";
    case SpeedBranch::PushedBackConstraint: return "pushed-back-constraint";
  }
  return "unknown";
}

SpeedResult ks_speed(double k, double M, double S_init) {
  check_positive(k, "k");
  check_positive(M, "M");
  check_positive(S_init, "S_init");
  SpeedResult out;
  out.c = k * M / S_init;
  out.branch = SpeedBranch::Direct;
  out.residual = 0.0;
  return out;
}

WaveProfile ks_profile(double d, double chi, double k, double M, double S_init,
                       std::vector<double> z_grid) {
  check_positive(d, "d");
  check_positive(k, "k");
  check_positive(M, "M");
  check_positive(S_init, "S_init");
  check_grid(z_grid);
  if (!(chi > d)) {
    throw ConstructionError("no admissible wave: the construction requires chi > d");
  }
  const double c = ks_speed(k, M, S_init).c;

  // Mass of the unnormalized density: substituting u = e^{-c z / d} gives
  // (d/c) * integral of (1+u)^{chi/(d-chi)} du over (0, inf) = (chi - d)/c.
  const double a_prime = M * c / (chi - d);

  const std::size_t n = z_grid.size();
  WaveProfile p;
  p.z = std::move(z_grid);
  p.rho.resize(n);
  p.S.resize(n);
  p.c = c;
  const double s_exp = d / (d - chi);
  const double r_exp = chi / (d - chi);
  const double log_aprime = std::log(a_prime);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = -c * p.z[i] / d;        // exponent of e^{-c z / d}
    const double sp = softplus(w);           // log(1 + e^w), overflow-safe
    p.S[i] = S_init * std::exp(s_exp * sp);
    p.rho[i] = std::exp(log_aprime + w + r_exp * sp);
  }
  p.meta.branch = SpeedBranch::Direct;
  p.meta.a_prime = a_prime;
  p.meta.S_minus = 0.0;
  p.meta.S_init = S_init;
  p.meta.mass = M;
  return p;
}

SpeedResult two_signal_speed(double chi_S, double chi_A, double alpha, double D_A) {
  check_positive(chi_S, "chi_S");
  if (chi_A < 0.0) throw std::domain_error("chi_A must be >= 0");
  check_positive(alpha, "alpha");
  check_positive(D_A, "D_A");

  SpeedResult out;
  out.branch = SpeedBranch::ImplicitRoot;
  const auto g = [&](double c) {
    return chi_S - c - chi_A * c / std::sqrt(c * c + 4.0 * alpha * D_A);
  };
  if (chi_A == 0.0) {
    out.c = chi_S;
    out.residual = 0.0;
  } else {
    // g(0) = chi_S > 0 and g(chi_S) < 0: the root is bracketed and unique
    // since g is strictly decreasing on (0, chi_S).
    const auto res = bisect(g, 0.0, chi_S);
    out.c = res.root;
    out.residual = std::abs(res.residual);
  }
  out.constraints.push_back({"0 < c < chi_S", out.c > 0.0 && out.c <= chi_S,
                             std::min(out.c, chi_S - out.c)});
  return out;
}

TwoSignalRates two_signal_rates(double c, double chi_S, double chi_A, double d,
                                double alpha, double D_A) {
  check_positive(d, "d");
  check_positive(alpha, "alpha");
  check_positive(D_A, "D_A");
  TwoSignalRates rates;
  rates.lambda_minus = (-c + chi_S + chi_A) / d;
  rates.lambda_plus = (c - chi_S + chi_A) / d;
  const double root = std::sqrt(c * c + 4.0 * alpha * D_A);
  rates.mu_minus = (-c + root) / (2.0 * D_A);
  rates.mu_plus = (c + root) / (2.0 * D_A);
  if (rates.lambda_minus < 0.0 || rates.lambda_plus < 0.0) {
    throw ConstructionError("inadmissible speed: negative density decay rate");
  }
  const double lhs = rates.lambda_minus * rates.mu_minus;
  const double rhs = rates.lambda_plus * rates.mu_plus;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale > 0.0 && std::abs(lhs - rhs) > 1e-9 * scale) {
    throw ConstructionError("closure identity lambda_- mu_- = lambda_+ mu_+ violated; "
                            "c is not the solved speed");
  }
  return rates;
}

namespace {

// Unit-amplitude convolution of the attractant kernel with the piecewise
// exponential density: four exponential terms per side (checked against
// direct quadrature in the tests). The middle term, the contribution of the
// density between the peak and the evaluation point, is factored by the
// slower rate so nothing overflows far from the peak.
double attractant_shape(double z, const TwoSignalRates& r) {
  const double lm = r.lambda_minus, lp = r.lambda_plus;
  const double mm = r.mu_minus, mp = r.mu_plus;
  if (z >= 0.0) {
    const double beta = std::min(lp, mp);
    const double delta = std::abs(mp - lp);
    const double middle = std::exp(-beta * z) * z * expm1_over(-delta * z);
    return std::exp(-mp * z) / (mp + lm) + middle + std::exp(-lp * z) / (mm + lp);
  }
  const double beta = std::min(lm, mm);
  const double delta = std::abs(lm - mm);
  const double middle = std::exp(beta * z) * (-z) * expm1_over(delta * z);
  return std::exp(mm * z) / (mm + lp) + middle + std::exp(lm * z) / (mp + lm);
}

// integral of rho over (z, +inf) for the normalized two-signal density
double two_signal_tail_mass(double z, double rho0, const TwoSignalRates& r) {
  if (z >= 0.0) return rho0 * std::exp(-r.lambda_plus * z) / r.lambda_plus;
  return rho0 / r.lambda_plus + rho0 * (1.0 - std::exp(r.lambda_minus * z)) / r.lambda_minus;
}

// Rebuild S from -c S' = -k(S, rho), i.e. S' = k(S, rho)/c, using the exact
// integral T(z) of rho over (z, +inf). Only meaningful for D = 0.
double signal_from_tail(const ConsumptionKind& kind, double S_init, double c, double T) {
  return std::visit(
      overloaded{
          [&](const ConstantConsumption& ck) { return S_init - ck.k * T / c; },
          [&](const LinearConsumption& ck) { return S_init * std::exp(-ck.k * T / c); },
          [&](const PowerConsumption& ck) {
            if (ck.m == 1.0) return S_init * std::exp(-ck.k * T / c);
            const double p = 1.0 - ck.m;
            const double base = std::pow(S_init, p) - p * ck.k * T / c;
            return base > 0.0 ? std::pow(base, 1.0 / p) : 0.0;
          },
      },
      kind);
}

}  // namespace

WaveProfile two_signal_profile(const ModelSpec& spec, double S_init, double M,
                               std::vector<double> z_grid) {
  spec.validate();
  check_positive(S_init, "S_init");
  check_positive(M, "M");
  check_grid(z_grid);
  const auto* sens = std::get_if<BinaryTwoSignal>(&spec.sensitivity);
  if (sens == nullptr || !spec.attractant) {
    throw ConstructionError("two-signal profile needs the two-signal sensitivity "
                            "and an attractant block");
  }
  if (spec.D != 0.0) {
    throw ConstructionError("the signal profile is only constructed for D = 0; "
                            "use the simulator for diffusive signals");
  }
  const AttractantSpec& att = *spec.attractant;
  const SpeedResult speed = two_signal_speed(sens->chi_S, sens->chi_A, att.alpha, att.D_A);
  const double c = speed.c;
  const TwoSignalRates rates =
      two_signal_rates(c, sens->chi_S, sens->chi_A, spec.d, att.alpha, att.D_A);
  if (rates.degenerate()) {
    throw ConstructionError("degenerate rates (chi_A = 0): no localized wave exists");
  }

  const double rho0 =
      M * rates.lambda_minus * rates.lambda_plus / (rates.lambda_minus + rates.lambda_plus);
  const double a0 = 1.0 / std::sqrt(c * c + 4.0 * att.alpha * att.D_A);

  const std::size_t n = z_grid.size();
  WaveProfile p;
  p.z = std::move(z_grid);
  p.rho.resize(n);
  p.S.resize(n);
  p.A = std::vector<double>(n);
  p.c = c;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = p.z[i];
    p.rho[i] = z < 0.0 ? rho0 * std::exp(rates.lambda_minus * z)
                       : rho0 * std::exp(-rates.lambda_plus * z);
    (*p.A)[i] = att.beta * a0 * rho0 * attractant_shape(z, rates);
    const double T = two_signal_tail_mass(z, rho0, rates);
    p.S[i] = signal_from_tail(spec.consumption, S_init, c, T);
  }
  p.meta.branch = speed.branch;
  p.meta.a_prime = rho0;
  p.meta.a0 = a0;
  p.meta.S_init = S_init;
  p.meta.S_minus = signal_from_tail(spec.consumption, S_init, c, M);
  p.meta.mass = M;
  p.meta.interfaces = {0.0};
  return p;
}

SpeedResult gogrow_speed(double chi, double r, double d) {
  check_positive(chi, "chi");
  check_positive(r, "r");
  check_positive(d, "d");
  const double pulled = 2.0 * std::sqrt(r * d);
  SpeedResult out;
  const double margin = std::sqrt(r * d) - chi;
  if (chi <= std::sqrt(r * d)) {
    out.c = pulled;
    out.branch = SpeedBranch::Pulled;
  } else {
    out.c = chi + r * d / chi;
    out.branch = SpeedBranch::PushedChemotaxis;
  }
  out.constraints.push_back({"chi <= sqrt(r d)", margin >= 0.0, margin});
  out.constraints.push_back({"c >= 2 sqrt(r d)", out.c >= pulled, out.c - pulled});
  return out;
}

WaveProfile gogrow_profile(double chi, double r, double d, double c,
                           std::vector<double> z_grid, double k, double S_0) {
  check_positive(chi, "chi");
  check_positive(r, "r");
  check_positive(d, "d");
  check_positive(k, "k");
  check_positive(S_0, "S_0");
  check_grid(z_grid);
  if (!(c > chi)) {
    throw ConstructionError("no admissible wave: the back flux forces c > chi");
  }
  const double disc = c * c - 4.0 * r * d;
  if (disc < -1e-9 * c * c) {
    throw ConstructionError("no admissible wave: c below the linear spreading speed");
  }

  const double a = 1.0;  // rho(0); the plateau wave has no mass constraint
  const bool critical = std::abs(c - 2.0 * std::sqrt(r * d)) <= 1e-9 * c;
  double lambda, b;
  if (critical) {
    lambda = std::sqrt(r / d);
    b = a * (std::sqrt(r * d) - chi) / d;  // flux continuity at the interface
    if (b < 0.0) {
      throw ConstructionError("no admissible wave at the critical speed: the linear "
                              "factor turns negative for chi > sqrt(r d)");
    }
  } else {
    lambda = (c + std::sqrt(disc)) / (2.0 * d);  // sharpest admissible decay
    b = 0.0;
  }
  const double rho_minus = a;
  const double J = (c - chi) * rho_minus;

  // integral of rho over (0, z) for z > 0
  const auto leading_mass = [&](double z) {
    const double e = std::exp(-lambda * z);
    double m = a * (1.0 - e) / lambda;
    if (critical) m += b * (1.0 - (1.0 + lambda * z) * e) / (lambda * lambda);
    return m;
  };
  const double total_leading = a / lambda + (critical ? b / (lambda * lambda) : 0.0);

  const std::size_t n = z_grid.size();
  WaveProfile p;
  p.z = std::move(z_grid);
  p.rho.resize(n);
  p.S.resize(n);
  p.c = c;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = p.z[i];
    if (z < 0.0) {
      p.rho[i] = rho_minus;
      p.S[i] = S_0 * std::exp(k * rho_minus * z / c);
    } else {
      p.rho[i] = (a + b * z) * std::exp(-lambda * z);
      p.S[i] = S_0 * std::exp(k * leading_mass(z) / c);
    }
  }
  p.meta.branch = chi <= std::sqrt(r * d) ? SpeedBranch::Pulled : SpeedBranch::PushedChemotaxis;
  p.meta.a_prime = a;
  p.meta.flux_J = J;
  p.meta.rho_minus = rho_minus;
  p.meta.S_minus = 0.0;
  p.meta.S_init = S_0 * std::exp(k * total_leading / c);
  p.meta.linear_b = b;
  p.meta.interfaces = {0.0};
  return p;
}

SpeedResult logsens_speed(double chi, double r, double d, double S_init, double S_0) {
  check_positive(chi, "chi");
  check_positive(r, "r");
  check_positive(d, "d");
  check_positive(S_init, "S_init");
  check_positive(S_0, "S_0");
  if (!(S_init > S_0)) {
    throw std::domain_error("S_init must exceed S_0: no resource-rich region ahead");
  }
  const double L = chi * std::log(S_init / S_0);
  SpeedResult out;
  if (d >= L) {
    out.c = 2.0 * std::sqrt(r * d);
    out.branch = SpeedBranch::Pulled;
  } else {
    out.c = 2.0 * std::sqrt(r * L);
    out.branch = SpeedBranch::PushedBackConstraint;
  }
  const double c2 = out.c * out.c;
  const double tol = 1e-12 * c2;  // the active branch holds with equality up to round-off
  out.constraints.push_back({"c^2 >= 4 r d", c2 - 4.0 * r * d >= -tol, c2 - 4.0 * r * d});
  out.constraints.push_back(
      {"c^2 >= 4 r chi log(S_init/S_0)", c2 - 4.0 * r * L >= -tol, c2 - 4.0 * r * L});
  return out;
}

double logsens_back_flux(double c, double r, double k, double S_init, double S_0) {
  check_positive(c, "c");
  check_positive(r, "r");
  check_positive(k, "k");
  check_positive(S_init, "S_init");
  check_positive(S_0, "S_0");
  return r * c / k * std::log(S_init / S_0);
}

PhaseCurves logsens_phase_curves(double c, double d, double k, double chi, double J, double r) {
  check_positive(c, "c");
  check_positive(d, "d");
  check_positive(k, "k");
  check_positive(chi, "chi");
  if (J < 0.0) throw std::domain_error("J must be >= 0");
  if (r < 0.0) throw std::domain_error("r must be >= 0");
  const double disc = c * c - 4.0 * r * d;
  if (disc < 0.0) {
    throw std::domain_error("c^2 < 4 r d: no real decay rate at the leading edge");
  }
  PhaseCurves curves;
  curves.c = c;
  curves.d = d;
  curves.k = k;
  curves.chi = chi;
  curves.J = J;
  curves.r = r;
  curves.front_rate = (c + std::sqrt(disc)) / (2.0 * d);
  return curves;
}

namespace {

struct EquationResidual {
  double max_abs = 0.0;    // residual
  double max_term = 0.0;   // largest individual term anywhere on the grid
  void add(double residual, double term_scale) {
    max_abs = std::max(max_abs, std::abs(residual));
    max_term = std::max(max_term, term_scale);
  }
  double normalized() const { return max_term > 0.0 ? max_abs / max_term : 0.0; }
};

}  // namespace

double residual_of_profile(const WaveProfile& profile, const ModelSpec& spec) {
  spec.validate();
  const std::size_t n = profile.z.size();
  if (n < 7) throw std::invalid_argument("profile too short for a residual check");
  if (profile.rho.size() != n || profile.S.size() != n) {
    throw std::invalid_argument("profile arrays must share the grid length");
  }
  const double dz = profile.z[1] - profile.z[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(profile.z[i] - profile.z[i - 1] - dz) > 1e-9 * dz) {
      throw std::invalid_argument("residual_of_profile requires a uniform grid");
    }
  }
  const bool has_A = profile.A.has_value();
  if (spec.uses_attractant_gradient() && !has_A) {
    throw std::invalid_argument("model reads the attractant gradient but the profile has no A");
  }

  const auto excluded = [&](std::size_t i) {
    for (double zi : profile.meta.interfaces) {
      // skip the interface cell plus two neighbours on each side: the stencil
      // of any retained cell then never touches the jump
      if (std::abs(profile.z[i] - zi) < 3.0 * dz) return true;
    }
    return false;
  };

  // centred advection velocity per cell; threshold/sign kinds see the 2 dz gradient
  std::vector<double> vel(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    std::optional<double> Al, Ar;
    if (has_A) {
      Al = (*profile.A)[i - 1];
      Ar = (*profile.A)[i + 1];
    }
    vel[i] = advection_velocity(spec, profile.S[i - 1], profile.S[i + 1], Al, Ar, 2.0 * dz);
  }

  const double c = profile.c;
  EquationResidual rho_eq, S_eq, A_eq;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    if (excluded(i)) continue;
    const double drho = (profile.rho[i + 1] - profile.rho[i - 1]) / (2.0 * dz);
    const double d2rho =
        (profile.rho[i + 1] - 2.0 * profile.rho[i] + profile.rho[i - 1]) / (dz * dz);
    const double dflux =
        (profile.rho[i + 1] * vel[i + 1] - profile.rho[i - 1] * vel[i - 1]) / (2.0 * dz);
    const double growth = reaction_rate(spec, profile.S[i]) * profile.rho[i];
    const double adv = -c * drho;
    const double diff = -spec.d * d2rho;
    rho_eq.add(adv + diff + dflux - growth,
               std::max({std::abs(adv), std::abs(diff), std::abs(dflux), std::abs(growth)}));

    const double dS = (profile.S[i + 1] - profile.S[i - 1]) / (2.0 * dz);
    const double d2S = (profile.S[i + 1] - 2.0 * profile.S[i] + profile.S[i - 1]) / (dz * dz);
    const double uptake = consumption_rate(spec, profile.S[i], profile.rho[i]);
    const double sadv = -c * dS;
    const double sdiff = spec.D * d2S;
    S_eq.add(sadv - sdiff + uptake,
             std::max({std::abs(sadv), std::abs(sdiff), std::abs(uptake)}));

    if (has_A && spec.attractant) {
      const auto& att = *spec.attractant;
      const auto& A = *profile.A;
      const double dA = (A[i + 1] - A[i - 1]) / (2.0 * dz);
      const double d2A = (A[i + 1] - 2.0 * A[i] + A[i - 1]) / (dz * dz);
      const double aadv = -c * dA;
      const double adiff = att.D_A * d2A;
      const double src = att.beta * profile.rho[i];
      const double sink = att.alpha * A[i];
      A_eq.add(aadv - adiff - src + sink,
               std::max({std::abs(aadv), std::abs(adiff), std::abs(src), std::abs(sink)}));
    }
  }
  double out = std::max(rho_eq.normalized(), S_eq.normalized());
  if (has_A) out = std::max(out, A_eq.normalized());
  return out;
}

}  // namespace sgg
