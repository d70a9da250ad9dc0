// Acceptance suite: one test case per release criterion, each printing a
// single PASS/FAIL line. Run directly or through `ctest -R acceptance -V`.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sgg/diagnostics.hpp"
#include "sgg/io.hpp"
#include "sgg/scenarios.hpp"
#include "sgg/solver.hpp"

using namespace sgg;
namespace fs = std::filesystem;

namespace {

struct CriterionReporter {
  std::string label;
  bool ok = true;
  std::vector<std::string> notes;

  explicit CriterionReporter(std::string label_) : label(std::move(label_)) {}
  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes.push_back(what);
    }
    CHECK_MESSAGE(condition, what);
  }
  ~CriterionReporter() {
    std::printf("[%s] %s", ok ? "PASS" : "FAIL", label.c_str());
    for (const auto& n : notes) std::printf(" | %s", n.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
};

RunReport run_preset_with(const std::string& name, double dx = 0.0, double t_end = 0.0,
                          double chi = 0.0) {
  ScenarioPreset p = preset(name);
  if (chi > 0.0) set_parameter(p, "model.chi", chi);
  if (dx > 0.0) {
    const double span = p.grid.x_max - p.grid.x_min;
    p.grid.n_cells = static_cast<int>(std::lround(span / dx));
  }
  if (t_end > 0.0) p.config.t_end = t_end;
  auto [state, report] = run(build_initial_state(p), p.model, p.grid, p.bc, p.config);
  return report;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

TEST_CASE("criterion 1: mass-budget speed law") {
  CriterionReporter crit("criterion 1: speed law c = k M / S_init, exact and simulated");

  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(0.1, 10.0);
  for (int i = 0; i < 5; ++i) {
    const double k = dist(rng), M = dist(rng), S_init = dist(rng);
    const SpeedResult r = ks_speed(k, M, S_init);
    crit.require(r.c == k * M / S_init,
                 "analytic speed must equal k*M/S_init in floating point");
    crit.require(r.branch == SpeedBranch::Direct, "branch must be direct");
  }

  // clamped simulation from the exact profile: d=1, chi=2, k=1, M=2, S_init=1
  const RunReport report = run_preset_with("ks-rescued", 0.05, 30.0);
  crit.require(!report.breakdown.occurred, "clamped run must not break down");
  crit.require(report.fit.has_value(), "run must produce a fitted speed");
  if (report.fit) {
    const double c_fit = report.fit->c_fit;
    crit.require(std::abs(c_fit - 2.0) <= 0.05 * 2.0,
                 "c_fit = " + fmt(c_fit) + " must be within 5% of 2");
  }
}

TEST_CASE("criterion 2: breakdown phenomenology and clamp rescue") {
  CriterionReporter crit("criterion 2: breakdown in (0.1, 2.0), clamped wave travels");

  const RunReport broke = run_preset_with("ks-breakdown");
  crit.require(broke.breakdown.occurred, "unclamped run must break down");
  crit.require(broke.breakdown.cause == BreakdownCause::NonpositiveSignal,
               "breakdown cause must be the non-positive signal");
  crit.require(broke.breakdown.t_break > 0.1 && broke.breakdown.t_break < 2.0,
               "t_break = " + fmt(broke.breakdown.t_break) + " must lie in (0.1, 2.0)");

  // the profile-aligned variant breaks in the same window
  const RunReport aligned = run_preset_with("ks-aligned");
  crit.require(aligned.breakdown.occurred, "profile-aligned run must break down");
  crit.require(aligned.breakdown.t_break > 0.1 && aligned.breakdown.t_break < 2.0,
               "aligned t_break = " + fmt(aligned.breakdown.t_break) + " must lie in (0.1, 2.0)");

  const RunReport rescued = run_preset_with("ks-rescued");  // t_end = 50
  crit.require(!rescued.breakdown.occurred, "clamped run must not break down");
  crit.require(rescued.t_final >= 50.0 * (1 - 1e-9), "clamped run must reach t_end = 50");
  crit.require(rescued.fit.has_value(), "clamped run must have a speed fit");
  if (rescued.fit) {
    crit.require(rescued.fit->c_fit > 0.0, "front must advance at positive speed");
    crit.require(rescued.fit->r_squared >= 0.99,
                 "r^2 = " + fmt(rescued.fit->r_squared) + " must be >= 0.99");
  }
}

TEST_CASE("criterion 3: two-signal implicit speed") {
  CriterionReporter crit("criterion 3: implicit relation residual, rate closure, simulation");

  std::mt19937 rng(77);
  std::uniform_real_distribution<double> chi_s_dist(0.5, 4.0);
  std::uniform_real_distribution<double> chi_a_dist(0.05, 2.0);
  std::uniform_real_distribution<double> coef_dist(0.2, 5.0);
  bool residuals_ok = true, closure_ok = true;
  double worst_res = 0.0, worst_closure = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double chi_S = chi_s_dist(rng);
    const double chi_A = chi_a_dist(rng);
    const double alpha = coef_dist(rng);
    const double D_A = coef_dist(rng);
    const SpeedResult r = two_signal_speed(chi_S, chi_A, alpha, D_A);
    const double g =
        chi_S - r.c - chi_A * r.c / std::sqrt(r.c * r.c + 4.0 * alpha * D_A);
    worst_res = std::max(worst_res, std::abs(g) / chi_S);
    if (!(std::abs(g) <= 1e-12 * chi_S)) residuals_ok = false;

    const TwoSignalRates rates = two_signal_rates(r.c, chi_S, chi_A, 1.0, alpha, D_A);
    const double lhs = rates.lambda_minus * rates.mu_minus;
    const double rhs = rates.lambda_plus * rates.mu_plus;
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
    worst_closure = std::max(worst_closure, rel);
    if (!(rel <= 1e-9)) closure_ok = false;
  }
  crit.require(residuals_ok,
               "max |g(c)|/chi_S over 100 samples = " + fmt(worst_res) + " must be <= 1e-12");
  crit.require(closure_ok,
               "max closure error = " + fmt(worst_closure) + " must be <= 1e-9 relative");

  const ScenarioPreset p = preset("two-signal");
  const double c_star = p.expected_speed->c;
  const RunReport report = run_preset_with("two-signal");
  crit.require(!report.breakdown.occurred, "two-signal run must complete");
  crit.require(report.fit.has_value(), "two-signal run must have a speed fit");
  if (report.fit) {
    crit.require(std::abs(report.fit->c_fit - c_star) <= 0.10 * c_star,
                 "c_fit = " + fmt(report.fit->c_fit) + " must be within 10% of " + fmt(c_star));
  }
}

TEST_CASE("criterion 4: go-or-grow dichotomy") {
  CriterionReporter crit("criterion 4: branch continuity and simulated dichotomy speeds");

  const double junction = 1.0;  // chi = sqrt(r d) with r = d = 1
  const double lo = gogrow_speed(junction * (1.0 - 1e-14), 1.0, 1.0).c;
  const double hi = gogrow_speed(junction * (1.0 + 1e-14), 1.0, 1.0).c;
  crit.require(std::abs(lo - hi) <= 1e-12,
               "branch mismatch at the junction = " + fmt(std::abs(lo - hi)));

  const RunReport pushed = run_preset_with("gogrow");  // chi = 2 -> c = 2.5
  crit.require(pushed.fit.has_value() && !pushed.breakdown.occurred, "pushed run must fit");
  if (pushed.fit) {
    crit.require(std::abs(pushed.fit->c_fit - 2.5) <= 0.05 * 2.5,
                 "pushed c_fit = " + fmt(pushed.fit->c_fit) + " must be within 5% of 2.5");
  }
  const RunReport pulled = run_preset_with("gogrow", 0.0, 0.0, 0.5);  // chi = 0.5 -> c = 2
  crit.require(pulled.fit.has_value() && !pulled.breakdown.occurred, "pulled run must fit");
  if (pulled.fit) {
    crit.require(std::abs(pulled.fit->c_fit - 2.0) <= 0.05 * 2.0,
                 "pulled c_fit = " + fmt(pulled.fit->c_fit) + " must be within 5% of 2");
  }
}

TEST_CASE("criterion 5: back-of-wave speed selection at desk scale") {
  CriterionReporter crit("criterion 5: logarithmic go-or-grow speed and dx-refinement trend");

  const double c_formula = logsens_speed(2.0, 1.0, 1.0, 8.0, 2.0).c;  // 2 sqrt(2 log 4)

  const double dxs[3] = {0.2, 0.1, 0.05};
  double fits[3] = {0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    const RunReport r = run_preset_with("logsens", dxs[i]);
    crit.require(!r.breakdown.occurred && r.fit.has_value(),
                 "logsens run at dx = " + fmt(dxs[i]) + " must complete with a fit");
    fits[i] = r.fit ? r.fit->c_fit : 0.0;
  }
  crit.require(fits[1] >= 3.0 && fits[1] <= 3.4,
               "preset c_fit = " + fmt(fits[1]) + " must lie in [3.0, 3.4]");
  crit.require(fits[0] < fits[1] && fits[1] < fits[2],
               "refinement must increase c_fit: " + fmt(fits[0]) + ", " + fmt(fits[1]) + ", " +
                   fmt(fits[2]));
  crit.require(std::abs(fits[2] - c_formula) < std::abs(fits[0] - c_formula),
               "refinement must approach the formula value " + fmt(c_formula));
  for (int i = 0; i + 1 < 3; ++i) {
    // halving dx moves the fit by less than its distance to the formula value
    crit.require(std::abs(fits[i + 1] - fits[i]) < std::abs(fits[i] - c_formula),
                 "refinement step " + fmt(dxs[i]) + " -> " + fmt(dxs[i + 1]) +
                     " must stay within the remaining error");
  }

  const RunReport pulled = run_preset_with("logsens", 0.0, 0.0, 0.1);  // pulled side
  crit.require(pulled.fit.has_value() && !pulled.breakdown.occurred,
               "pulled-side run must fit");
  if (pulled.fit) {
    crit.require(std::abs(pulled.fit->c_fit - 2.0) <= 0.05 * 2.0,
                 "pulled-side c_fit = " + fmt(pulled.fit->c_fit) + " must be within 5% of 2");
  }
}

TEST_CASE("criterion 6: phase-plane geometry at the back of the wave") {
  CriterionReporter crit("criterion 6: portrait hugs the theoretical curves, vertex matches");

  ScenarioPreset p = preset("logsens");
  auto [state, report] = run(build_initial_state(p), p.model, p.grid, p.bc, p.config);
  crit.require(!report.breakdown.occurred && report.fit.has_value(),
               "logsens run must complete with a fit");
  const double c_fit = report.fit ? report.fit->c_fit : 0.0;
  const double k = 1.0, chi = 2.0, d = 1.0, r = 1.0, S_0 = 2.0;

  // curves re-evaluated at the measured speed (vanishing back discriminant)
  const double J_fit = c_fit * c_fit * c_fit / (4.0 * k * chi);
  const PhaseCurves curves = logsens_phase_curves(c_fit, d, k, chi, J_fit, r);

  // portrait of the wave in its co-moving frame: a window around the front;
  // the far wake left by the initial data is not part of the wave
  const auto x_front = front_position(state, p.grid);
  crit.require(x_front.has_value(), "final state must have a located front");
  const double front_x = x_front.value_or(0.0);
  const PhasePortrait portrait = phase_portrait(state, p.grid, c_fit, S_0);

  const std::size_t n = portrait.rho.size();
  const auto in_window = [&](std::size_t i) {
    const double z = p.grid.center(static_cast<int>(i) + 1) - front_x;
    return z >= -20.0 && z <= 5.0;
  };

  double max_rho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_window(i)) max_rho = std::max(max_rho, portrait.rho[i]);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_window(i) || portrait.near_interface[i]) continue;
    const double rho = portrait.rho[i];
    const double d_front = std::abs(portrait.drho_dz[i] - curves.front(rho));
    const double d_back = std::abs(portrait.drho_dz[i] - curves.back(rho));
    worst = std::max(worst, std::min(d_front, d_back));
  }
  crit.require(worst <= 0.1 * max_rho,
               "max curve distance = " + fmt(worst) + " must be <= 0.1 max rho = " +
                   fmt(0.1 * max_rho));

  // vertex of the back parabola estimated from the rising branch of the
  // portrait: on the parabola, rho - sqrt(rho' c d / (k chi)) equals the
  // vertex exactly for points above it
  std::vector<double> estimates;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_window(i) || portrait.near_interface[i]) continue;
    if (!(state.S[i + 1] < S_0) || portrait.drho_dz[i] <= 0.2) continue;
    estimates.push_back(portrait.rho[i] -
                        std::sqrt(portrait.drho_dz[i] * c_fit * d / (k * chi)));
  }
  crit.require(estimates.size() >= 3, "need rising-branch points for the vertex estimate");
  std::sort(estimates.begin(), estimates.end());
  const double vertex_est = estimates.empty() ? 0.0 : estimates[estimates.size() / 2];
  const double vertex_pred = c_fit * c_fit / (2.0 * k * chi);
  crit.require(std::abs(vertex_est - vertex_pred) <= 0.10 * vertex_pred,
               "portrait vertex = " + fmt(vertex_est) + " must be within 10% of " +
                   fmt(vertex_pred));
}

TEST_CASE("criterion 7: property suite") {
  CriterionReporter crit("criterion 7: conservation, positivity, residuals, CLI determinism");

  // mass conservation over >= 1e4 growth-free steps
  {
    const ScenarioPreset p = preset("ks-rescued");
    auto [state, report] = run(build_initial_state(p), p.model, p.grid, p.bc, p.config);
    crit.require(report.n_steps >= 10000,
                 "run must take >= 1e4 steps, took " + std::to_string(report.n_steps));
    const double m0 = report.monitor_series.front().mass;
    const double m1 = report.monitor_series.back().mass;
    crit.require(std::abs(m1 - m0) <= 1e-10 * m0,
                 "mass drift = " + fmt(std::abs(m1 - m0) / m0) + " must be <= 1e-10 relative");

    // discrete maximum principle for the signal
    double prev = report.monitor_series.front().max_S;
    bool monotone = true, bounded = true;
    for (const auto& m : report.monitor_series) {
      if (m.max_S > prev + 1e-12) monotone = false;
      if (m.max_S > p.s_init + 1e-12) bounded = false;
      prev = m.max_S;
    }
    crit.require(monotone, "max S must be non-increasing");
    crit.require(bounded, "S must stay below S_init + 1e-12");
  }

  // strict signal positivity under linear consumption without clamp
  {
    ScenarioPreset p = preset("logsens");
    p.config.t_end = 40.0;
    auto [state, report] = run(build_initial_state(p), p.model, p.grid, p.bc, p.config);
    crit.require(!report.breakdown.occurred, "linear-consumption run must not break down");
    bool positive = true;
    for (const auto& m : report.monitor_series) positive = positive && m.min_S > 0.0;
    crit.require(positive, "min S must stay strictly positive without a clamp");
  }

  // closed-form profiles satisfy the moving-frame equations
  {
    std::vector<double> z;
    for (int i = 0; i <= 16000; ++i) z.push_back(-8.0 + i * 1e-3);

    const WaveProfile ks = ks_profile(1.0, 2.0, 1.0, 2.0, 1.0, z);
    ModelSpec ks_spec;
    ks_spec.sensitivity = LogGradient{2.0};
    ks_spec.consumption = ConstantConsumption{1.0};
    const double r_ks = residual_of_profile(ks, ks_spec);
    crit.require(r_ks <= 1e-4, "ks residual = " + fmt(r_ks) + " must be <= 1e-4");

    const WaveProfile gg = gogrow_profile(2.0, 1.0, 1.0, 2.5, z, 1.0, 2.0);
    ModelSpec gg_spec;
    gg_spec.sensitivity = ThresholdedSign{2.0, 2.0};
    gg_spec.consumption = LinearConsumption{1.0};
    gg_spec.growth = ThresholdGrowth{1.0, 2.0};
    const double r_gg = residual_of_profile(gg, gg_spec);
    crit.require(r_gg <= 1e-4, "gogrow residual = " + fmt(r_gg) + " must be <= 1e-4");

    ModelSpec ts_spec;
    ts_spec.sensitivity = BinaryTwoSignal{2.0, 1.0};
    ts_spec.consumption = LinearConsumption{1.0};
    ts_spec.attractant = AttractantSpec{1.0, 1.0, 1.0};
    const WaveProfile ts = two_signal_profile(ts_spec, 1.0, 2.0, z);
    const double r_ts = residual_of_profile(ts, ts_spec);
    crit.require(r_ts <= 1e-4, "two-signal residual = " + fmt(r_ts) + " must be <= 1e-4");
  }

  // byte-identical CLI reruns
  {
    const char* cli = std::getenv("SGG_CLI");
    crit.require(cli != nullptr, "SGG_CLI must point at the command-line binary");
    if (cli) {
      const fs::path base = fs::temp_directory_path() / "sgg-acceptance-cli";
      fs::remove_all(base);
      const auto read_file = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
      };
      const auto run_cli = [&](const std::string& args, const fs::path& out,
                               const fs::path& log) {
        const std::string cmd =
            std::string(cli) + " " + args + " --out " + out.string() + " > " + log.string();
        return std::system(cmd.c_str());
      };
      const std::vector<std::pair<std::string, std::string>> cases = {
          {"simulate --preset ks-breakdown", "ks-breakdown"},
          {"sweep --preset gogrow --t-end 20 --axis model.chi --values 0.5,2 --jobs 2",
           "gogrow"},
          {"phase-plane --preset gogrow --t-end 12 --time 10", "gogrow"},
      };
      bool identical = true;
      for (const auto& [args, scenario] : cases) {
        const fs::path out1 = base / "a", out2 = base / "b";
        fs::create_directories(out1);
        fs::create_directories(out2);
        const int rc1 = run_cli(args, out1, base / "a.log");
        const int rc2 = run_cli(args, out2, base / "b.log");
        if (rc1 != rc2) identical = false;
        if (read_file(base / "a.log") != read_file(base / "b.log")) identical = false;
        for (const auto& entry : fs::recursive_directory_iterator(out1 / scenario)) {
          if (!entry.is_regular_file()) continue;
          const fs::path rel = fs::relative(entry.path(), out1);
          if (read_file(entry.path()) != read_file(out2 / rel)) {
            identical = false;
            crit.notes.push_back("mismatch in " + rel.string());
          }
        }
      }
      // the speed command writes no files; compare stdout only
      {
        const std::string cmd = std::string(cli) +
                                " speed --logsens --chi 2 -r 1 -d 1 --s-init 8 --s0 2 > ";
        const int rc1 = std::system((cmd + (base / "s1.log").string()).c_str());
        const int rc2 = std::system((cmd + (base / "s2.log").string()).c_str());
        if (rc1 != rc2) identical = false;
        if (read_file(base / "s1.log") != read_file(base / "s2.log")) identical = false;
        const std::string payload = read_file(base / "s1.log");
        if (payload.find("3.33") == std::string::npos) identical = false;
      }
      crit.require(identical, "all CLI outputs must be byte-identical across reruns");
      fs::remove_all(base);
    }
  }
}
