// sggwave: simulate and analyze 1D chemotactic traveling waves in
// self-generated gradients.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sgg/diagnostics.hpp"
#include "sgg/io.hpp"
#include "sgg/scenarios.hpp"
#include "sgg/solver.hpp"

namespace fs = std::filesystem;
using namespace sgg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUnexpected = 2;

struct CommonOptions {
  std::string preset_name;
  std::string config_path;
  std::string out_dir;
  std::optional<double> t_end;
  std::optional<double> dx;
  std::string clamp;  // "", "off" or a number
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_out = true) {
  cmd->add_option("--preset", opt.preset_name, "named scenario preset");
  cmd->add_option("--config", opt.config_path, "path to a scenario config file");
  cmd->add_option("--t-end", opt.t_end, "override the final time");
  cmd->add_option("--dx", opt.dx, "override the grid spacing");
  cmd->add_option("--clamp", opt.clamp, "signal clamp epsilon, or 'off'");
  if (with_out) {
    cmd->add_option("--out", opt.out_dir, "output directory (default $SGG_OUT_DIR or ./sgg-out)");
  }
}

std::string default_out_dir() {
  if (const char* env = std::getenv("SGG_OUT_DIR")) return env;
  return "sgg-out";
}

ScenarioPreset load_scenario(const CommonOptions& opt) {
  if (opt.preset_name.empty() == opt.config_path.empty()) {
    throw ConfigError(0, "choose exactly one of --preset or --config");
  }
  ScenarioPreset p;
  if (!opt.preset_name.empty()) {
    p = preset(opt.preset_name);
  } else {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError(0, "cannot open config file: " + opt.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    p = parse_config(ss.str());
  }
  if (opt.t_end) {
    if (!(*opt.t_end > 0)) throw ConfigError(0, "--t-end must be > 0");
    p.config.t_end = *opt.t_end;
  }
  if (opt.dx) {
    if (!(*opt.dx > 0)) throw ConfigError(0, "--dx must be > 0");
    const double span = p.grid.x_max - p.grid.x_min;
    p.grid.n_cells = std::max(16, static_cast<int>(std::lround(span / *opt.dx)));
  }
  if (!opt.clamp.empty()) {
    if (opt.clamp == "off") {
      p.config.clamp_epsilon.reset();
    } else {
      try {
        p.config.clamp_epsilon = std::stod(opt.clamp);
      } catch (const std::exception&) {
        throw ConfigError(0, "--clamp expects a number or 'off'");
      }
    }
  }
  return p;
}

std::string out_root(const CommonOptions& opt) {
  return opt.out_dir.empty() ? default_out_dir() : opt.out_dir;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

enum class RunStatus { Completed, Breakdown, Invalidated, NoFit };

RunStatus classify(const RunReport& report) {
  if (report.breakdown.occurred) return RunStatus::Breakdown;
  if (report.invalidated) return RunStatus::Invalidated;
  if (!report.fit) return RunStatus::NoFit;
  return RunStatus::Completed;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::Breakdown: return "breakdown";
    case RunStatus::Invalidated: return "invalidated";
    case RunStatus::NoFit: return "no-fit";
  }
  return "unknown";
}

/// Whether the run matches the scenario's expected outcome tag.
bool outcome_matches(const ScenarioPreset& p, const RunReport& report) {
  if (!p.expected) return !report.breakdown.occurred;
  switch (*p.expected) {
    case OutcomeTag::Breakdown:
      return report.breakdown.occurred;
    case OutcomeTag::Rescued:
    case OutcomeTag::StationarySpike:
      return !report.breakdown.occurred && report.t_final >= p.config.t_end * (1 - 1e-9);
    case OutcomeTag::TravelingWave:
      return !report.breakdown.occurred && !report.invalidated && report.fit &&
             report.fit->c_fit > 0.0;
  }
  return false;
}

int cmd_simulate(const CommonOptions& opt, bool split_snapshots) {
  const ScenarioPreset p = load_scenario(opt);
  FieldState init = build_initial_state(p);
  auto [final_state, report] = run(std::move(init), p.model, p.grid, p.bc, p.config);

  const fs::path dir = fs::path(out_root(opt)) / p.name;
  fs::create_directories(dir);
  if (split_snapshots) {
    for (std::size_t i = 0; i < report.snapshots.size(); ++i) {
      char name[40];
      std::snprintf(name, sizeof(name), "snapshot_%06zu.csv", i);
      write_file((dir / name).string(), snapshot_to_csv(report.snapshots[i], p.grid));
    }
  } else {
    write_file((dir / "snapshots.csv").string(), snapshots_to_csv(report.snapshots, p.grid));
  }
  write_file((dir / "trajectory.csv").string(), trajectory_to_csv(report.front));
  write_file((dir / "report.json").string(), report_to_json(report, p, p.expected_speed));

  const bool ok = outcome_matches(p, report);
  std::string line = "scenario=" + p.name + " status=" + to_string(classify(report));
  line += " t_final=" + fmt6(report.t_final);
  line += report.fit ? " c_fit=" + fmt6(report.fit->c_fit) : " c_fit=na";
  line += report.fit ? " r_squared=" + fmt6(report.fit->r_squared) : " r_squared=na";
  line += p.expected_speed ? " analytic_c=" + fmt6(p.expected_speed->c) : " analytic_c=na";
  if (report.breakdown.occurred) {
    line += " breakdown=" + to_string(report.breakdown.cause) +
            "@t=" + fmt6(report.breakdown.t_break);
  } else {
    line += " breakdown=none";
  }
  line += std::string(" outcome=") + (ok ? "expected" : "unexpected");
  std::cout << line << "\n";
  return ok ? kExitOk : kExitUnexpected;
}

struct SweepRow {
  double value = 0.0;
  std::string analytic_c = "na";
  std::string branch = "na";
  std::string c_fit = "na";
  std::string r_squared = "na";
  std::string status = "ok";
};

int cmd_sweep(const CommonOptions& opt, const std::string& axis, const std::string& values_arg,
              int jobs) {
  const ScenarioPreset base = load_scenario(opt);
  std::vector<double> values;
  {
    std::string tokens = values_arg;
    for (char& ch : tokens) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream iss(tokens);
    double v;
    while (iss >> v) values.push_back(v);
  }
  if (values.empty()) throw ConfigError(0, "--values lists no numbers");
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError(0, "--values must be finite");
  }
  {
    // fail fast on a bad axis before spawning workers
    ScenarioPreset probe = base;
    set_parameter(probe, axis, values.front());
  }

  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      SweepRow& row = rows[i];
      row.value = values[i];
      try {
        ScenarioPreset p = base;
        set_parameter(p, axis, values[i]);
        if (p.expected_speed) {
          row.analytic_c = format_double(p.expected_speed->c);
          row.branch = to_string(p.expected_speed->branch);
        }
        FieldState init = build_initial_state(p);
        auto [final_state, report] = run(std::move(init), p.model, p.grid, p.bc, p.config);
        if (report.fit) {
          row.c_fit = format_double(report.fit->c_fit);
          row.r_squared = format_double(report.fit->r_squared);
        }
        row.status = to_string(classify(report));
      } catch (const std::exception& ex) {
        row.status = std::string("error: ") + ex.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::string csv = "value,analytic_c,branch,c_fit,r_squared,status\n";
  for (const auto& row : rows) {
    csv += format_double(row.value) + "," + row.analytic_c + "," + row.branch + "," + row.c_fit +
           "," + row.r_squared + "," + row.status + "\n";
  }
  const fs::path dir = fs::path(out_root(opt)) / base.name;
  fs::create_directories(dir);
  write_file((dir / "sweep.csv").string(), csv);
  std::cout << csv;
  return kExitOk;
}

struct CurveSet {
  bool have_theory = false;
  PhaseCurves theory;
  bool theory_is_lines = false;  // two-signal / gogrow style straight lines
  double front_slope = 0.0, back_slope = 0.0, back_offset = 0.0;
  bool have_cfit = false;
  PhaseCurves at_cfit;
};

double back_plateau_estimate(const FieldState& state, const Grid1D& grid, double S_0) {
  // largest density on the sub-threshold side, away from boundary and interface
  int interface_cell = grid.n_cells - 1;
  for (int i = grid.n_cells - 2; i >= 0; --i) {
    if (state.S[i] <= S_0 && state.S[i + 1] >= S_0) {
      interface_cell = i;
      break;
    }
  }
  double best = 0.0;
  for (int i = 5; i < interface_cell - 3; ++i) best = std::max(best, state.rho[i]);
  return best;
}

int cmd_phase_plane(const CommonOptions& opt, double time) {
  const ScenarioPreset p = load_scenario(opt);
  FieldState init = build_initial_state(p);
  auto [final_state, report] = run(std::move(init), p.model, p.grid, p.bc, p.config);

  const FieldState* snap = nullptr;
  for (const auto& s : report.snapshots) {
    if (s.t + 1e-9 >= time) {
      snap = &s;
      break;
    }
  }
  if (snap == nullptr) {
    throw ConfigError(0, "no snapshot at or after t = " + fmt6(time) +
                             " (run ends at t = " + fmt6(report.t_final) + ")");
  }

  const double c_fit = report.fit ? report.fit->c_fit : 0.0;
  const PhasePortrait portrait = phase_portrait(*snap, p.grid, c_fit, p.model.threshold());

  CurveSet curves;
  const ModelSpec& m = p.model;
  const auto consumption_k = [&] {
    if (const auto* c = std::get_if<ConstantConsumption>(&m.consumption)) return c->k;
    if (const auto* c = std::get_if<LinearConsumption>(&m.consumption)) return c->k;
    return std::get<PowerConsumption>(m.consumption).k;
  };
  if (const auto* s = std::get_if<ThresholdedLogGradient>(&m.sensitivity)) {
    if (const auto* g = std::get_if<ThresholdGrowth>(&m.growth)) {
      const double k = consumption_k();
      // curves of the D = 0 analysis, at the D = 0 formula speed
      const SpeedResult th = logsens_speed(s->chi, g->r, m.d, p.s_init, s->S_0);
      const double J_th = th.c * th.c * th.c / (4.0 * k * s->chi);
      curves.theory = logsens_phase_curves(th.c, m.d, k, s->chi, J_th, g->r);
      curves.have_theory = true;
      if (m.D > 0.0 && report.fit && c_fit * c_fit >= 4.0 * g->r * m.d) {
        const double J_fit = c_fit * c_fit * c_fit / (4.0 * k * s->chi);
        curves.at_cfit = logsens_phase_curves(c_fit, m.d, k, s->chi, J_fit, g->r);
        curves.have_cfit = true;
      }
    }
  } else if (std::holds_alternative<LogGradient>(m.sensitivity) &&
             std::holds_alternative<NoGrowth>(m.growth) && p.expected_speed) {
    // growth-free zero-flux curves: the quadratic with J = 0, r = 0
    const double k = consumption_k();
    const auto& lg = std::get<LogGradient>(m.sensitivity);
    curves.theory = logsens_phase_curves(p.expected_speed->c, m.d, k, lg.chi, 0.0, 0.0);
    curves.have_theory = true;
  } else if (const auto* ts = std::get_if<ThresholdedSign>(&m.sensitivity)) {
    if (std::holds_alternative<ThresholdGrowth>(m.growth) && p.expected_speed) {
      const auto& g = std::get<ThresholdGrowth>(m.growth);
      const double c = p.expected_speed->c;
      const double lambda = (c + std::sqrt(std::max(0.0, c * c - 4.0 * g.r * m.d))) / (2.0 * m.d);
      const double rho_minus = back_plateau_estimate(*snap, p.grid, ts->S_0);
      curves.theory_is_lines = true;
      curves.have_theory = true;
      curves.front_slope = -lambda;
      // back line d rho' = J + (chi - c) rho with J pinned by the plateau
      curves.back_slope = (ts->chi - c) / m.d;
      curves.back_offset = (c - ts->chi) * rho_minus / m.d;
    }
  } else if (const auto* bs = std::get_if<BinaryTwoSignal>(&m.sensitivity)) {
    if (m.attractant && p.expected_speed) {
      const TwoSignalRates rates = two_signal_rates(p.expected_speed->c, bs->chi_S, bs->chi_A,
                                                    m.d, m.attractant->alpha, m.attractant->D_A);
      curves.theory_is_lines = true;
      curves.have_theory = true;
      curves.front_slope = -rates.lambda_plus;
      curves.back_slope = rates.lambda_minus;
      curves.back_offset = 0.0;
    }
  }

  std::string csv = "rho,drho_dz,curve_front,curve_back";
  if (curves.have_cfit) csv += ",curve_front_cfit,curve_back_cfit";
  csv += ",near_interface\n";
  const std::string na = "nan";
  for (std::size_t i = 0; i < portrait.rho.size(); ++i) {
    const double rho = portrait.rho[i];
    csv += format_double(rho) + "," + format_double(portrait.drho_dz[i]);
    if (curves.have_theory && curves.theory_is_lines) {
      csv += "," + format_double(curves.front_slope * rho);
      csv += "," + format_double(curves.back_offset + curves.back_slope * rho);
    } else if (curves.have_theory) {
      csv += "," + format_double(curves.theory.front(rho));
      csv += "," + format_double(curves.theory.back(rho));
    } else {
      csv += "," + na + "," + na;
    }
    if (curves.have_cfit) {
      csv += "," + format_double(curves.at_cfit.front(rho));
      csv += "," + format_double(curves.at_cfit.back(rho));
    }
    csv += portrait.near_interface[i] ? ",1\n" : ",0\n";
  }
  const fs::path dir = fs::path(out_root(opt)) / p.name;
  fs::create_directories(dir);
  write_file((dir / "phase_plane.csv").string(), csv);
  std::cout << csv;
  return kExitOk;
}

int cmd_profile(const CommonOptions& opt, double z_min, double z_max, double dz,
                std::optional<double> mass_flag) {
  const ScenarioPreset p = load_scenario(opt);
  if (!(dz > 0.0) || !(z_max > z_min)) {
    throw ConfigError(0, "--dz must be > 0 and --z-max must exceed --z-min");
  }
  std::vector<double> z;
  const int n = static_cast<int>(std::lround((z_max - z_min) / dz));
  z.reserve(n + 1);
  for (int i = 0; i <= n; ++i) z.push_back(z_min + i * dz);

  double mass = mass_flag.value_or(1.0);
  if (!mass_flag) {
    if (const auto* f = std::get_if<FromProfileDesc>(&p.init)) mass = f->mass;
  }

  const ModelSpec& m = p.model;
  WaveProfile profile;
  if (const auto* lg = std::get_if<LogGradient>(&m.sensitivity);
      lg != nullptr && std::holds_alternative<NoGrowth>(m.growth) &&
      std::holds_alternative<ConstantConsumption>(m.consumption)) {
    const auto& cons = std::get<ConstantConsumption>(m.consumption);
    profile = ks_profile(m.d, lg->chi, cons.k, mass, p.s_init, std::move(z));
  } else if (std::holds_alternative<BinaryTwoSignal>(m.sensitivity) && m.attractant) {
    profile = two_signal_profile(m, p.s_init, mass, std::move(z));
  } else if (const auto* ts = std::get_if<ThresholdedSign>(&m.sensitivity);
             ts != nullptr && std::holds_alternative<ThresholdGrowth>(m.growth) &&
             std::holds_alternative<LinearConsumption>(m.consumption)) {
    const auto& g = std::get<ThresholdGrowth>(m.growth);
    const auto& cons = std::get<LinearConsumption>(m.consumption);
    const double c = gogrow_speed(ts->chi, g.r, m.d).c;
    profile = gogrow_profile(ts->chi, g.r, m.d, c, std::move(z), cons.k, ts->S_0);
  } else {
    throw ConfigError(0, "no closed-form profile for this model; supported: the "
                         "log-gradient wave (constant consumption, no growth), the "
                         "two-signal wave, and the binary go-or-grow wave");
  }

  const fs::path dir = fs::path(out_root(opt)) / p.name;
  fs::create_directories(dir);
  write_file((dir / "profile.csv").string(), profile_to_csv(profile));
  std::cout << "scenario=" + p.name + " c=" + fmt6(profile.c) +
                   " branch=" + to_string(profile.meta.branch) + "\n";
  return kExitOk;
}

struct SpeedFlags {
  bool ks = false, two_signal = false, gogrow = false, logsens = false;
  double k = 0, M = 0, s_init = 0, chi_s = 0, chi_a = 0, alpha = 0, d_a = 0;
  double chi = 0, r = 0, d = 0, s0 = 0;
};

int cmd_speed(CLI::App* cmd, const SpeedFlags& f) {
  const int picked = int(f.ks) + int(f.two_signal) + int(f.gogrow) + int(f.logsens);
  if (picked != 1) {
    throw ConfigError(0, "choose exactly one of --ks, --two-signal, --gogrow, --logsens");
  }
  const auto used = [&](const std::string& name) { return cmd->count(name) > 0; };
  const auto forbid = [&](std::initializer_list<const char*> names) {
    for (const char* n : names) {
      if (used(n)) throw ConfigError(0, std::string("flag ") + n + " does not apply here");
    }
  };
  const auto need = [&](std::initializer_list<const char*> names) {
    for (const char* n : names) {
      if (!used(n)) throw ConfigError(0, std::string("missing required flag ") + n);
    }
  };

  SpeedResult result;
  if (f.ks) {
    need({"-k", "-M", "--s-init"});
    forbid({"--chi", "--chi-s", "--chi-a", "--alpha", "--d-a", "-r", "-d", "--s0"});
    result = ks_speed(f.k, f.M, f.s_init);
  } else if (f.two_signal) {
    need({"--chi-s", "--chi-a", "--alpha", "--d-a"});
    forbid({"-k", "-M", "--s-init", "--chi", "-r", "-d", "--s0"});
    result = two_signal_speed(f.chi_s, f.chi_a, f.alpha, f.d_a);
  } else if (f.gogrow) {
    need({"--chi", "-r", "-d"});
    forbid({"-k", "-M", "--s-init", "--chi-s", "--chi-a", "--alpha", "--d-a", "--s0"});
    result = gogrow_speed(f.chi, f.r, f.d);
  } else {
    need({"--chi", "-r", "-d", "--s-init", "--s0"});
    forbid({"-k", "-M", "--chi-s", "--chi-a", "--alpha", "--d-a"});
    result = logsens_speed(f.chi, f.r, f.d, f.s_init, f.s0);
  }
  std::cout << speed_result_to_json(result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D chemotactic traveling waves in self-generated gradients"};
  app.require_subcommand(1);

  CommonOptions sim_opt;
  bool split_snapshots = false;
  CLI::App* sim = app.add_subcommand("simulate", "run a scenario and dump snapshots + report");
  add_common(sim, sim_opt);
  sim->add_flag("--split-snapshots", split_snapshots, "one CSV file per snapshot");

  SpeedFlags sf;
  CLI::App* speed = app.add_subcommand("speed", "print the analytic wave speed as JSON");
  speed->add_flag("--ks", sf.ks, "mass-carried wave: c = k M / S_init");
  speed->add_flag("--two-signal", sf.two_signal, "implicit two-signal relation");
  speed->add_flag("--gogrow", sf.gogrow, "binary go-or-grow dichotomy");
  speed->add_flag("--logsens", sf.logsens, "logarithmic go-or-grow dichotomy");
  speed->add_option("-k", sf.k, "consumption rate");
  speed->add_option("-M", sf.M, "total cell mass");
  speed->add_option("--s-init", sf.s_init, "signal level ahead of the wave");
  speed->add_option("--chi-s", sf.chi_s, "advection speed on the consumed signal");
  speed->add_option("--chi-a", sf.chi_a, "advection speed on the attractant");
  speed->add_option("--alpha", sf.alpha, "attractant degradation rate");
  speed->add_option("--d-a", sf.d_a, "attractant diffusivity");
  speed->add_option("--chi", sf.chi, "advection strength");
  speed->add_option("-r", sf.r, "division rate");
  speed->add_option("-d", sf.d, "cell diffusivity");
  speed->add_option("--s0", sf.s0, "phenotype switch threshold");

  CommonOptions sweep_opt;
  std::string axis, values;
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep one parameter, CSV row per value");
  add_common(sweep, sweep_opt);
  sweep->add_option("--axis", axis, "parameter path, e.g. model.chi")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--jobs", jobs, "worker count");

  CommonOptions pp_opt;
  double pp_time = 0.0;
  CLI::App* pp = app.add_subcommand("phase-plane", "portrait (rho, rho') vs theoretical curves");
  add_common(pp, pp_opt);
  pp->add_option("--time", pp_time, "snapshot time (first snapshot at or after)")->required();

  CommonOptions prof_opt;
  double z_min = -30.0, z_max = 30.0, dz = 0.01;
  std::optional<double> prof_mass;
  CLI::App* prof = app.add_subcommand("profile", "sample the closed-form wave of a scenario");
  add_common(prof, prof_opt);
  prof->add_option("--z-min", z_min, "left end of the moving-frame grid");
  prof->add_option("--z-max", z_max, "right end of the moving-frame grid");
  prof->add_option("--dz", dz, "sample spacing");
  prof->add_option("--mass", prof_mass, "total cell mass (defaults to the init mass)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_opt, split_snapshots);
    if (speed->parsed()) return cmd_speed(speed, sf);
    if (sweep->parsed()) return cmd_sweep(sweep_opt, axis, values, jobs);
    if (pp->parsed()) return cmd_phase_plane(pp_opt, pp_time);
    if (prof->parsed()) return cmd_profile(prof_opt, z_min, z_max, dz, prof_mass);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
