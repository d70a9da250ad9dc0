#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "sgg/analytic.hpp"
#include "sgg/diagnostics.hpp"
#include "sgg/io.hpp"
#include "sgg/model.hpp"
#include "sgg/scenarios.hpp"
#include "sgg/solver.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sgg;

namespace {

py::dict meta_to_dict(const ProfileMeta& m) {
  py::dict d;
  d["branch"] = to_string(m.branch);
  d["a_prime"] = m.a_prime;
  d["a0"] = m.a0;
  d["flux_J"] = m.flux_J;
  d["rho_minus"] = m.rho_minus;
  d["S_minus"] = m.S_minus;
  d["S_init"] = m.S_init;
  d["mass"] = m.mass;
  d["linear_b"] = m.linear_b;
  d["interfaces"] = m.interfaces;
  return d;
}

py::dict report_to_dict(const RunReport& r) {
  py::dict d;
  d["t_final"] = r.t_final;
  d["n_steps"] = r.n_steps;
  d["invalidated"] = r.invalidated;
  d["breakdown"] = r.breakdown.occurred;
  if (r.breakdown.occurred) {
    d["t_break"] = r.breakdown.t_break;
    d["breakdown_cause"] = to_string(r.breakdown.cause);
    d["breakdown_cell"] = r.breakdown.location;
  }
  if (r.fit) {
    d["c_fit"] = r.fit->c_fit;
    d["r_squared"] = r.fit->r_squared;
  } else {
    d["c_fit"] = py::none();
    d["r_squared"] = py::none();
  }
  std::vector<double> ft, fx;
  for (const auto& s : r.front.samples) {
    ft.push_back(s.t);
    fx.push_back(s.x);
  }
  d["front_t"] = ft;
  d["front_x"] = fx;
  std::vector<double> mt, mass, min_S, max_S, min_rho;
  for (const auto& m : r.monitor_series) {
    mt.push_back(m.t);
    mass.push_back(m.mass);
    min_S.push_back(m.min_S);
    max_S.push_back(m.max_S);
    min_rho.push_back(m.min_rho);
  }
  d["monitor_t"] = mt;
  d["mass"] = mass;
  d["min_S"] = min_S;
  d["max_S"] = max_S;
  d["min_rho"] = min_rho;
  return d;
}

ScenarioPreset apply_overrides(ScenarioPreset p, std::optional<double> t_end,
                               std::optional<double> dx, std::optional<double> clamp,
                               bool clamp_off) {
  if (t_end) p.config.t_end = *t_end;
  if (dx) {
    const double span = p.grid.x_max - p.grid.x_min;
    p.grid.n_cells = std::max(16, static_cast<int>(std::lround(span / *dx)));
  }
  if (clamp_off) p.config.clamp_epsilon.reset();
  if (clamp) p.config.clamp_epsilon = *clamp;
  return p;
}

py::dict run_scenario(const ScenarioPreset& p) {
  FieldState init = build_initial_state(p);
  auto [state, report] = run(std::move(init), p.model, p.grid, p.bc, p.config);
  py::dict d = report_to_dict(report);
  d["name"] = p.name;
  if (p.expected_speed) {
    d["analytic_c"] = p.expected_speed->c;
    d["analytic_branch"] = to_string(p.expected_speed->branch);
  } else {
    d["analytic_c"] = py::none();
    d["analytic_branch"] = py::none();
  }
  d["x"] = p.grid.centers();
  d["rho"] = state.rho;
  d["S"] = state.S;
  if (state.A) d["A"] = *state.A;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Traveling waves of cells in self-generated chemical gradients: "
            "closed-form constructions, wave-speed formulas and a finite-volume simulator.";

  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<BreakdownError>(m, "BreakdownError", PyExc_RuntimeError);

  py::class_<ConstraintRecord>(m, "ConstraintRecord")
      .def_readonly("name", &ConstraintRecord::name)
      .def_readonly("satisfied", &ConstraintRecord::satisfied)
      .def_readonly("margin", &ConstraintRecord::margin)
      .def("__repr__", [](const ConstraintRecord& c) {
        return "<ConstraintRecord " + c.name + (c.satisfied ? " ok" : " violated") + ">";
      });

  py::class_<SpeedResult>(m, "SpeedResult")
      .def_readonly("c", &SpeedResult::c)
      .def_readonly("residual", &SpeedResult::residual)
      .def_property_readonly("branch",
                             [](const SpeedResult& r) { return to_string(r.branch); })
      .def_readonly("constraints", &SpeedResult::constraints)
      .def("__repr__", [](const SpeedResult& r) {
        return "<SpeedResult c=" + std::to_string(r.c) + " branch=" + to_string(r.branch) + ">";
      });

  py::class_<WaveProfile>(m, "WaveProfile")
      .def_readonly("z", &WaveProfile::z)
      .def_readonly("rho", &WaveProfile::rho)
      .def_readonly("S", &WaveProfile::S)
      .def_property_readonly("A",
                             [](const WaveProfile& p) -> py::object {
                               if (!p.A) return py::none();
                               return py::cast(*p.A);
                             })
      .def_readonly("c", &WaveProfile::c)
      .def_property_readonly("meta", [](const WaveProfile& p) { return meta_to_dict(p.meta); });

  py::class_<TwoSignalRates>(m, "TwoSignalRates")
      .def_readonly("lambda_minus", &TwoSignalRates::lambda_minus)
      .def_readonly("lambda_plus", &TwoSignalRates::lambda_plus)
      .def_readonly("mu_minus", &TwoSignalRates::mu_minus)
      .def_readonly("mu_plus", &TwoSignalRates::mu_plus)
      .def("degenerate", &TwoSignalRates::degenerate);

  py::class_<PhaseCurves>(m, "PhaseCurves")
      .def_readonly("front_rate", &PhaseCurves::front_rate)
      .def("front", &PhaseCurves::front, "rho"_a)
      .def("back", &PhaseCurves::back, "rho"_a)
      .def("vertex", &PhaseCurves::vertex);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_property_readonly("sensitivity",
                             [](const ModelSpec& s) { return sensitivity_name(s.sensitivity); })
      .def_property_readonly("consumption",
                             [](const ModelSpec& s) { return consumption_name(s.consumption); })
      .def_property_readonly("growth", [](const ModelSpec& s) { return growth_name(s.growth); })
      .def_readonly("d", &ModelSpec::d)
      .def_readonly("D", &ModelSpec::D);

  py::class_<ScenarioPreset>(m, "ScenarioPreset")
      .def_readonly("name", &ScenarioPreset::name)
      .def_readonly("model", &ScenarioPreset::model)
      .def_readonly("s_init", &ScenarioPreset::s_init)
      .def_property_readonly("expected",
                             [](const ScenarioPreset& p) -> py::object {
                               if (!p.expected) return py::none();
                               return py::cast(to_string(*p.expected));
                             })
      .def_property_readonly("expected_speed",
                             [](const ScenarioPreset& p) -> py::object {
                               if (!p.expected_speed) return py::none();
                               return py::cast(*p.expected_speed);
                             });

  // wave speeds
  m.def("ks_speed", &ks_speed, "k"_a, "M"_a, "S_init"_a,
        "Mass-carried wave speed c = k M / S_init.");
  m.def("two_signal_speed", &two_signal_speed, "chi_S"_a, "chi_A"_a, "alpha"_a, "D_A"_a,
        "Root of chi_S - c = chi_A c / sqrt(c^2 + 4 alpha D_A).");
  m.def("gogrow_speed", &gogrow_speed, "chi"_a, "r"_a, "d"_a,
        "Binary go-or-grow dichotomy: 2 sqrt(r d) or chi + r d / chi.");
  m.def("logsens_speed", &logsens_speed, "chi"_a, "r"_a, "d"_a, "S_init"_a, "S_0"_a,
        "Logarithmic go-or-grow speed 2 sqrt(r max{d, chi log(S_init/S_0)}).");

  // profiles and their machinery
  m.def("ks_profile", &ks_profile, "d"_a, "chi"_a, "k"_a, "M"_a, "S_init"_a, "z"_a);
  m.def("two_signal_rates", &two_signal_rates, "c"_a, "chi_S"_a, "chi_A"_a, "d"_a, "alpha"_a,
        "D_A"_a);
  m.def(
      "two_signal_profile",
      [](double chi_S, double chi_A, double d, double D_A, double alpha, double beta, double k,
         double S_init, double M, std::vector<double> z) {
        ModelSpec spec;
        spec.sensitivity = BinaryTwoSignal{chi_S, chi_A};
        spec.consumption = LinearConsumption{k};
        spec.d = d;
        spec.attractant = AttractantSpec{D_A, alpha, beta};
        return two_signal_profile(spec, S_init, M, std::move(z));
      },
      "chi_S"_a, "chi_A"_a, "d"_a, "D_A"_a, "alpha"_a, "beta"_a, "k"_a, "S_init"_a, "M"_a, "z"_a);
  m.def("gogrow_profile", &gogrow_profile, "chi"_a, "r"_a, "d"_a, "c"_a, "z"_a, "k"_a = 1.0,
        "S_0"_a = 1.0);
  m.def("logsens_back_flux", &logsens_back_flux, "c"_a, "r"_a, "k"_a, "S_init"_a, "S_0"_a);
  m.def("logsens_phase_curves", &logsens_phase_curves, "c"_a, "d"_a, "k"_a, "chi"_a, "J"_a,
        "r"_a);
  m.def(
      "residual_of_profile",
      [](const WaveProfile& p, const ScenarioPreset& preset) {
        return residual_of_profile(p, preset.model);
      },
      "profile"_a, "scenario"_a,
      "Max moving-frame PDE residual of a profile against a scenario's model.");

  // model kernels, evaluated through a scenario's model
  m.def(
      "advection_velocity",
      [](const ScenarioPreset& preset, double S_left, double S_right,
         std::optional<double> A_left, std::optional<double> A_right, double dx) {
        return advection_velocity(preset.model, S_left, S_right, A_left, A_right, dx);
      },
      "scenario"_a, "S_left"_a, "S_right"_a, "A_left"_a = py::none(), "A_right"_a = py::none(),
      "dx"_a = 1.0);
  m.def(
      "reaction_rate",
      [](const ScenarioPreset& preset, double S) { return reaction_rate(preset.model, S); },
      "scenario"_a, "S"_a);
  m.def(
      "consumption_rate",
      [](const ScenarioPreset& preset, double S, double rho) {
        return consumption_rate(preset.model, S, rho);
      },
      "scenario"_a, "S"_a, "rho"_a);

  // scenarios and simulation
  m.def("preset", &preset, "name"_a);
  m.def("preset_names", &preset_names);
  m.def("parse_config", &parse_config, "text"_a);
  m.def("serialize_config", &serialize_config, "scenario"_a);
  m.def(
      "run_preset",
      [](const std::string& name, std::optional<double> t_end, std::optional<double> dx,
         std::optional<double> clamp, bool clamp_off) {
        return run_scenario(apply_overrides(preset(name), t_end, dx, clamp, clamp_off));
      },
      "name"_a, "t_end"_a = py::none(), "dx"_a = py::none(), "clamp"_a = py::none(),
      "clamp_off"_a = false,
      "Run a named preset and return fitted speed, monitors and final fields.");
  m.def(
      "run_config",
      [](const std::string& text, std::optional<double> t_end, std::optional<double> dx,
         std::optional<double> clamp, bool clamp_off) {
        return run_scenario(apply_overrides(parse_config(text), t_end, dx, clamp, clamp_off));
      },
      "text"_a, "t_end"_a = py::none(), "dx"_a = py::none(), "clamp"_a = py::none(),
      "clamp_off"_a = false);

  m.attr("__version__") = "0.1.0";
}
