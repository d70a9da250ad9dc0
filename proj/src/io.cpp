#include "sgg/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sgg {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_rows(std::string& out, const FieldState& state, const Grid1D& grid, bool with_A) {
  const std::string t = format_double(state.t);
  for (int i = 0; i < grid.n_cells; ++i) {
    out += t;
    out += ',';
    out += format_double(grid.center(i));
    out += ',';
    out += format_double(state.rho[i]);
    out += ',';
    out += format_double(state.S[i]);
    if (with_A) {
      out += ',';
      out += format_double(state.A ? (*state.A)[i] : 0.0);
    }
    out += '\n';
  }
}

json constraints_to_json(const std::vector<ConstraintRecord>& constraints) {
  json arr = json::array();
  for (const auto& c : constraints) {
    arr.push_back({{"name", c.name}, {"satisfied", c.satisfied}, {"margin", c.margin}});
  }
  return arr;
}

json speed_result_json(const SpeedResult& r) {
  return {{"c", r.c},
          {"branch", to_string(r.branch)},
          {"residual", r.residual},
          {"constraints", constraints_to_json(r.constraints)}};
}

}  // namespace

std::string snapshots_to_csv(std::span<const FieldState> states, const Grid1D& grid) {
  const bool with_A = !states.empty() && states.front().A.has_value();
  std::string out = with_A ? "t,x,rho,S,A\n" : "t,x,rho,S\n";
  for (const auto& s : states) append_rows(out, s, grid, with_A);
  return out;
}

std::string snapshot_to_csv(const FieldState& state, const Grid1D& grid) {
  const bool with_A = state.A.has_value();
  std::string out = with_A ? "t,x,rho,S,A\n" : "t,x,rho,S\n";
  append_rows(out, state, grid, with_A);
  return out;
}

std::string trajectory_to_csv(const FrontTrajectory& traj) {
  std::string out = "t,x_front\n";
  for (const auto& s : traj.samples) {
    out += format_double(s.t);
    out += ',';
    out += format_double(s.x);
    out += '\n';
  }
  return out;
}

std::string profile_to_csv(const WaveProfile& p) {
  const bool with_A = p.A.has_value();
  std::string out = with_A ? "z,rho,S,A\n" : "z,rho,S\n";
  for (std::size_t i = 0; i < p.z.size(); ++i) {
    out += format_double(p.z[i]);
    out += ',';
    out += format_double(p.rho[i]);
    out += ',';
    out += format_double(p.S[i]);
    if (with_A) {
      out += ',';
      out += format_double((*p.A)[i]);
    }
    out += '\n';
  }
  return out;
}

std::string report_to_json(const RunReport& report, const ScenarioPreset& preset,
                           const std::optional<SpeedResult>& analytic) {
  json j;
  j["scenario"] = preset.name;
  j["scheme"] = {{"x_min", report.scheme.x_min},
                 {"x_max", report.scheme.x_max},
                 {"dx", report.scheme.dx},
                 {"n_cells", report.scheme.n_cells},
                 {"dt_max", report.scheme.dt_max},
                 {"cfl", report.scheme.cfl},
                 {"t_end", report.scheme.t_end},
                 {"output_every", report.scheme.output_every}};
  if (report.scheme.clamp_epsilon) {
    j["scheme"]["clamp_epsilon"] = *report.scheme.clamp_epsilon;
  } else {
    j["scheme"]["clamp_epsilon"] = nullptr;
  }
  j["n_steps"] = report.n_steps;
  j["t_final"] = report.t_final;
  j["invalidated"] = report.invalidated;
  j["breakdown"] = {{"occurred", report.breakdown.occurred}};
  if (report.breakdown.occurred) {
    j["breakdown"]["t_break"] = report.breakdown.t_break;
    j["breakdown"]["cause"] = to_string(report.breakdown.cause);
    j["breakdown"]["location"] = report.breakdown.location;
  }
  json front_t = json::array(), front_x = json::array();
  for (const auto& s : report.front.samples) {
    front_t.push_back(s.t);
    front_x.push_back(s.x);
  }
  j["front"] = {{"threshold", report.front.threshold_spec}, {"t", front_t}, {"x", front_x}};
  json mt = json::array(), mass = json::array(), min_S = json::array(), max_S = json::array(),
       min_rho = json::array();
  for (const auto& m : report.monitor_series) {
    mt.push_back(m.t);
    mass.push_back(m.mass);
    min_S.push_back(m.min_S);
    max_S.push_back(m.max_S);
    min_rho.push_back(m.min_rho);
  }
  j["monitors"] = {{"t", mt}, {"mass", mass}, {"min_S", min_S}, {"max_S", max_S},
                   {"min_rho", min_rho}};
  if (report.fit) {
    j["speed_fit"] = {{"c_fit", report.fit->c_fit},
                      {"r_squared", report.fit->r_squared},
                      {"window", {report.fit->t_lo, report.fit->t_hi}}};
  } else {
    j["speed_fit"] = nullptr;
  }
  if (analytic) {
    j["analytic"] = speed_result_json(*analytic);
  } else {
    j["analytic"] = nullptr;
  }
  if (preset.expected) j["expected"] = to_string(*preset.expected);
  return j.dump(2) + "\n";
}

std::string speed_result_to_json(const SpeedResult& result) {
  return speed_result_json(result).dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sgg
