#include "sgg/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace sgg {

namespace {

// shortest decimal that round-trips the double exactly
std::string fmt_g17(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// parsing

struct RawEntry {
  int line = 0;
  std::string key;
  std::string value;
  bool used = false;
};

struct RawSection {
  int line = 0;
  std::vector<RawEntry> entries;
  bool present = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const RawEntry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(e.line, "key '" + e.key + "' expects a number, got '" + e.value + "'");
  }
}

int to_int(const RawEntry& e) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(e.line, "key '" + e.key + "' expects an integer, got '" + e.value + "'");
  }
}

class SectionView {
 public:
  SectionView(const std::string& name, RawSection& raw) : name_(name), raw_(raw) {}

  RawEntry* find(const std::string& key) {
    for (auto& e : raw_.entries) {
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    }
    return nullptr;
  }
  std::optional<double> get_double(const std::string& key) {
    RawEntry* e = find(key);
    if (!e) return std::nullopt;
    return to_double(*e);
  }
  std::optional<int> get_int(const std::string& key) {
    RawEntry* e = find(key);
    if (!e) return std::nullopt;
    return to_int(*e);
  }
  std::optional<std::string> get_string(const std::string& key) {
    RawEntry* e = find(key);
    if (!e) return std::nullopt;
    return e->value;
  }
  double require_double(const std::string& key) {
    RawEntry* e = find(key);
    if (!e) throw ConfigError(raw_.line, "[" + name_ + "] is missing required key '" + key + "'");
    return to_double(*e);
  }
  std::string require_string(const std::string& key) {
    RawEntry* e = find(key);
    if (!e) throw ConfigError(raw_.line, "[" + name_ + "] is missing required key '" + key + "'");
    return e->value;
  }
  void finish() const {
    for (const auto& e : raw_.entries) {
      if (!e.used) throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + name_ + "]");
    }
  }

 private:
  std::string name_;
  RawSection& raw_;
};

std::vector<double> parse_value_list(const RawEntry& e) {
  std::vector<double> out;
  std::istringstream iss(e.value);
  std::string tok;
  while (iss >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError(e.line, "key '" + e.key + "' contains a non-numeric entry '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError(e.line, "key '" + e.key + "' lists no values");
  return out;
}

SignalBC parse_signal_bc(const RawEntry& e) {
  std::istringstream iss(e.value);
  std::string kind;
  iss >> kind;
  if (kind == "no-flux") {
    std::string extra;
    if (iss >> extra) throw ConfigError(e.line, "no-flux takes no value");
    return SignalBC{SignalBCKind::NoFlux, 0.0};
  }
  if (kind == "dirichlet") {
    double v;
    if (!(iss >> v)) throw ConfigError(e.line, "dirichlet needs a value, e.g. 'dirichlet 1.0'");
    return SignalBC{SignalBCKind::Dirichlet, v};
  }
  throw ConfigError(e.line, "boundary kind must be 'no-flux' or 'dirichlet VALUE'");
}

OutcomeTag parse_outcome(const RawEntry& e) {
  if (e.value == "breakdown") return OutcomeTag::Breakdown;
  if (e.value == "rescued") return OutcomeTag::Rescued;
  if (e.value == "stationary-spike") return OutcomeTag::StationarySpike;
  if (e.value == "traveling-wave") return OutcomeTag::TravelingWave;
  throw ConfigError(e.line, "unknown expected outcome '" + e.value + "'");
}

ModelSpec parse_model_section(SectionView& sec) {
  ModelSpec model;
  const std::string sens = sec.require_string("sensitivity");
  if (sens == "log-gradient") {
    model.sensitivity = LogGradient{sec.require_double("chi")};
  } else if (sens == "two-signal") {
    model.sensitivity = BinaryTwoSignal{sec.require_double("chi_s"), sec.require_double("chi_a")};
  } else if (sens == "tanh") {
    model.sensitivity = TanhSensitivity{sec.require_double("chi"), sec.require_double("f_scale")};
  } else if (sens == "threshold-sign") {
    model.sensitivity = ThresholdedSign{sec.require_double("chi"), sec.require_double("s_0")};
  } else if (sens == "threshold-log") {
    model.sensitivity = ThresholdedLogGradient{sec.require_double("chi"), sec.require_double("s_0")};
  } else {
    throw ConfigError(0, "unknown sensitivity '" + sens + "'");
  }

  const std::string cons = sec.require_string("consumption");
  if (cons == "constant") {
    model.consumption = ConstantConsumption{sec.require_double("k")};
  } else if (cons == "linear") {
    model.consumption = LinearConsumption{sec.require_double("k")};
  } else if (cons == "power") {
    model.consumption = PowerConsumption{sec.require_double("k"), sec.require_double("m")};
  } else {
    throw ConfigError(0, "unknown consumption '" + cons + "'");
  }

  const std::string growth = sec.get_string("growth").value_or("none");
  if (growth == "none") {
    model.growth = NoGrowth{};
  } else if (growth == "threshold") {
    // the growth threshold is the shared s_0 of the model
    std::optional<double> s0;
    if (const auto* s = std::get_if<ThresholdedSign>(&model.sensitivity)) s0 = s->S_0;
    if (const auto* s = std::get_if<ThresholdedLogGradient>(&model.sensitivity)) s0 = s->S_0;
    if (!s0) s0 = sec.get_double("s_0");
    if (!s0) throw ConfigError(0, "threshold growth needs s_0");
    model.growth = ThresholdGrowth{sec.require_double("r"), *s0};
  } else {
    throw ConfigError(0, "unknown growth '" + growth + "'");
  }

  model.d = sec.require_double("d");
  model.D = sec.get_double("D").value_or(0.0);

  const auto D_A = sec.get_double("D_A");
  const auto alpha = sec.get_double("alpha");
  const auto beta = sec.get_double("beta");
  if (D_A || alpha || beta) {
    if (!(D_A && alpha && beta)) {
      throw ConfigError(0, "an attractant block needs all of D_A, alpha, beta");
    }
    model.attractant = AttractantSpec{*D_A, *alpha, *beta};
  }
  return model;
}

InitDesc parse_init_section(SectionView& sec) {
  const std::string kind = sec.require_string("kind");
  if (kind == "gaussian") {
    return GaussianInit{sec.require_double("center"), sec.require_double("width"),
                        sec.require_double("mass")};
  }
  if (kind == "half-gaussian") {
    return HalfGaussianInit{sec.require_double("width"), sec.require_double("mass")};
  }
  if (kind == "plateau") {
    return PlateauInit{sec.require_double("edge"), sec.require_double("height")};
  }
  if (kind == "from-profile") {
    FromProfileDesc desc;
    desc.profile = sec.require_string("profile");
    if (desc.profile != "ks" && desc.profile != "two-signal" && desc.profile != "gogrow") {
      throw ConfigError(0, "profile must be one of ks, two-signal, gogrow");
    }
    desc.mass = sec.require_double("mass");
    desc.offset = sec.get_double("offset");
    return desc;
  }
  if (kind == "custom") {
    CustomInit c;
    RawEntry* rho = sec.find("values_rho");
    if (!rho) throw ConfigError(0, "custom init needs values_rho");
    c.rho = parse_value_list(*rho);
    if (RawEntry* s = sec.find("values_s")) c.S = parse_value_list(*s);
    return c;
  }
  if (kind == "stationary-spike") {
    return SpikeDesc{sec.require_double("mass")};
  }
  throw ConfigError(0, "unknown init kind '" + kind + "'");
}

// semantic checks that span sections
void cross_validate(const ScenarioPreset& p) {
  p.model.validate();
  p.grid.validate();
  p.bc.validate(p.grid);
  p.config.validate();
  if (!(p.s_init > 0.0)) throw ConfigError(0, "s_init must be > 0");

  if (const auto* f = std::get_if<FromProfileDesc>(&p.init)) {
    if (f->profile == "ks") {
      const auto* lg = std::get_if<LogGradient>(&p.model.sensitivity);
      if (!lg) throw ConfigError(0, "profile ks needs the log-gradient sensitivity");
      if (!(lg->chi > p.model.d)) {
        throw ConfigError(0, "profile ks requires chi > d: no admissible wave otherwise");
      }
      if (!std::holds_alternative<ConstantConsumption>(p.model.consumption)) {
        throw ConfigError(0, "profile ks is constructed for the constant consumption kernel");
      }
    } else if (f->profile == "two-signal") {
      if (!std::holds_alternative<BinaryTwoSignal>(p.model.sensitivity) || !p.model.attractant) {
        throw ConfigError(0, "profile two-signal needs the two-signal sensitivity "
                             "with an attractant block");
      }
      if (p.model.D != 0.0) {
        throw ConfigError(0, "profile two-signal is constructed for D = 0");
      }
    } else if (f->profile == "gogrow") {
      if (!std::holds_alternative<ThresholdedSign>(p.model.sensitivity) ||
          !std::holds_alternative<ThresholdGrowth>(p.model.growth)) {
        throw ConfigError(0, "profile gogrow needs threshold-sign sensitivity "
                             "and threshold growth");
      }
      if (!std::holds_alternative<LinearConsumption>(p.model.consumption)) {
        throw ConfigError(0, "profile gogrow rebuilds the signal with the linear kernel; "
                             "set consumption = linear");
      }
    }
  }
  if (std::holds_alternative<SpikeDesc>(p.init)) {
    if (p.grid.domain_kind != DomainKind::HalfLine) {
      throw ConfigError(0, "stationary-spike init needs domain = half-line");
    }
    const auto* lg = std::get_if<LogGradient>(&p.model.sensitivity);
    if (!lg || !(lg->chi > p.model.d)) {
      throw ConfigError(0, "stationary-spike init requires log-gradient sensitivity "
                           "with chi > d");
    }
    if (!std::holds_alternative<ConstantConsumption>(p.model.consumption) || !(p.model.D > 0.0)) {
      throw ConfigError(0, "stationary-spike init requires constant consumption and D > 0");
    }
  }
}

// ---------------------------------------------------------------------------
// serialization

void serialize_model(std::string& out, const ModelSpec& m) {
  out += "[model]\n";
  out += "sensitivity = " + sensitivity_name(m.sensitivity) + "\n";
  std::visit(overloaded{
                 [&](const LogGradient& s) { out += "chi = " + fmt_g17(s.chi) + "\n"; },
                 [&](const BinaryTwoSignal& s) {
                   out += "chi_s = " + fmt_g17(s.chi_S) + "\n";
                   out += "chi_a = " + fmt_g17(s.chi_A) + "\n";
                 },
                 [&](const TanhSensitivity& s) {
                   out += "chi = " + fmt_g17(s.chi) + "\n";
                   out += "f_scale = " + fmt_g17(s.f_scale) + "\n";
                 },
                 [&](const ThresholdedSign& s) {
                   out += "chi = " + fmt_g17(s.chi) + "\n";
                   out += "s_0 = " + fmt_g17(s.S_0) + "\n";
                 },
                 [&](const ThresholdedLogGradient& s) {
                   out += "chi = " + fmt_g17(s.chi) + "\n";
                   out += "s_0 = " + fmt_g17(s.S_0) + "\n";
                 },
             },
             m.sensitivity);
  out += "consumption = " + consumption_name(m.consumption) + "\n";
  std::visit(overloaded{
                 [&](const ConstantConsumption& c) { out += "k = " + fmt_g17(c.k) + "\n"; },
                 [&](const LinearConsumption& c) { out += "k = " + fmt_g17(c.k) + "\n"; },
                 [&](const PowerConsumption& c) {
                   out += "k = " + fmt_g17(c.k) + "\n";
                   out += "m = " + fmt_g17(c.m) + "\n";
                 },
             },
             m.consumption);
  out += "growth = " + growth_name(m.growth) + "\n";
  if (const auto* g = std::get_if<ThresholdGrowth>(&m.growth)) {
    out += "r = " + fmt_g17(g->r) + "\n";
    if (!std::holds_alternative<ThresholdedSign>(m.sensitivity) &&
        !std::holds_alternative<ThresholdedLogGradient>(m.sensitivity)) {
      out += "s_0 = " + fmt_g17(g->S_0) + "\n";
    }
  }
  out += "d = " + fmt_g17(m.d) + "\n";
  out += "D = " + fmt_g17(m.D) + "\n";
  if (m.attractant) {
    out += "D_A = " + fmt_g17(m.attractant->D_A) + "\n";
    out += "alpha = " + fmt_g17(m.attractant->alpha) + "\n";
    out += "beta = " + fmt_g17(m.attractant->beta) + "\n";
  }
}

std::string serialize_signal_bc(const SignalBC& bc) {
  if (bc.kind == SignalBCKind::NoFlux) return "no-flux";
  return "dirichlet " + fmt_g17(bc.value);
}

void serialize_init(std::string& out, const InitDesc& init, double s_init) {
  out += "[init]\n";
  std::visit(overloaded{
                 [&](const GaussianInit& g) {
                   out += "kind = gaussian\n";
                   out += "center = " + fmt_g17(g.center) + "\n";
                   out += "width = " + fmt_g17(g.width) + "\n";
                   out += "mass = " + fmt_g17(g.mass) + "\n";
                 },
                 [&](const HalfGaussianInit& g) {
                   out += "kind = half-gaussian\n";
                   out += "width = " + fmt_g17(g.width) + "\n";
                   out += "mass = " + fmt_g17(g.mass) + "\n";
                 },
                 [&](const PlateauInit& p) {
                   out += "kind = plateau\n";
                   out += "edge = " + fmt_g17(p.edge) + "\n";
                   out += "height = " + fmt_g17(p.height) + "\n";
                 },
                 [&](const FromProfileDesc& f) {
                   out += "kind = from-profile\n";
                   out += "profile = " + f.profile + "\n";
                   out += "mass = " + fmt_g17(f.mass) + "\n";
                   if (f.offset) out += "offset = " + fmt_g17(*f.offset) + "\n";
                 },
                 [&](const CustomInit& c) {
                   out += "kind = custom\n";
                   out += "values_rho =";
                   for (double v : c.rho) out += " " + fmt_g17(v);
                   out += "\n";
                   if (c.S) {
                     out += "values_s =";
                     for (double v : *c.S) out += " " + fmt_g17(v);
                     out += "\n";
                   }
                 },
                 [&](const SpikeDesc& s) {
                   out += "kind = stationary-spike\n";
                   out += "mass = " + fmt_g17(s.mass) + "\n";
                 },
             },
             init);
  out += "s_init = " + fmt_g17(s_init) + "\n";
}

}  // namespace

std::string to_string(OutcomeTag tag) {
  switch (tag) {
    case OutcomeTag::Breakdown: return "breakdown";
    case OutcomeTag::Rescued: return "rescued";
    case OutcomeTag::StationarySpike: return "stationary-spike";
    case OutcomeTag::TravelingWave: return "traveling-wave";
  }
  return "unknown";
}

std::string serialize_config(const ScenarioPreset& p) {
  std::string out;
  out += "[scenario]\n";
  out += "name = " + p.name + "\n";
  if (p.expected) out += "expected = " + to_string(*p.expected) + "\n";
  out += "\n";
  serialize_model(out, p.model);
  out += "\n[grid]\n";
  out += "x_min = " + fmt_g17(p.grid.x_min) + "\n";
  out += "x_max = " + fmt_g17(p.grid.x_max) + "\n";
  out += "n_cells = " + std::to_string(p.grid.n_cells) + "\n";
  out += std::string("domain = ") +
         (p.grid.domain_kind == DomainKind::HalfLine ? "half-line" : "line") + "\n";
  out += "\n[boundary]\n";
  out += "s_left = " + serialize_signal_bc(p.bc.S_left) + "\n";
  out += "s_right = " + serialize_signal_bc(p.bc.S_right) + "\n";
  out += "\n";
  serialize_init(out, p.init, p.s_init);
  out += "\n[run]\n";
  out += "t_end = " + fmt_g17(p.config.t_end) + "\n";
  out += "dt_max = " + fmt_g17(p.config.dt_max) + "\n";
  out += "cfl = " + fmt_g17(p.config.cfl) + "\n";
  out += std::string("clamp = ") +
         (p.config.clamp_epsilon ? fmt_g17(*p.config.clamp_epsilon) : "off") + "\n";
  out += "output_every = " + fmt_g17(p.config.output_every) + "\n";
  out += std::string("on_breakdown = ") +
         (p.config.breakdown_policy == BreakdownPolicy::Halt ? "halt" : "clamp-continue") + "\n";
  return out;
}

ScenarioPreset parse_config(const std::string& text) {
  static const std::vector<std::string> known_sections = {"scenario", "model", "grid",
                                                          "boundary", "init", "run"};
  std::map<std::string, RawSection> sections;
  for (const auto& name : known_sections) sections[name];

  std::istringstream iss(text);
  std::string line;
  std::string current;
  int lineno = 0;
  while (std::getline(iss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      auto it = sections.find(name);
      if (it == sections.end()) throw ConfigError(lineno, "unknown section [" + name + "]");
      if (it->second.present) throw ConfigError(lineno, "duplicate section [" + name + "]");
      it->second.present = true;
      it->second.line = lineno;
      current = name;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
    if (current.empty()) throw ConfigError(lineno, "key outside of any section");
    RawEntry entry;
    entry.line = lineno;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    if (entry.key.empty()) throw ConfigError(lineno, "empty key");
    for (const auto& prev : sections[current].entries) {
      if (prev.key == entry.key) {
        throw ConfigError(lineno, "duplicate key '" + entry.key + "' in [" + current + "]");
      }
    }
    sections[current].entries.push_back(std::move(entry));
  }

  for (const auto& required : {"model", "grid", "init", "run"}) {
    if (!sections[required].present) {
      throw ConfigError(0, std::string("missing required section [") + required + "]");
    }
  }

  ScenarioPreset p;
  {
    SectionView sec("scenario", sections["scenario"]);
    p.name = sec.get_string("name").value_or("custom");
    if (RawEntry* e = sec.find("expected")) p.expected = parse_outcome(*e);
    sec.finish();
  }
  {
    SectionView sec("model", sections["model"]);
    p.model = parse_model_section(sec);
    sec.finish();
  }
  {
    SectionView sec("grid", sections["grid"]);
    p.grid.x_min = sec.require_double("x_min");
    p.grid.x_max = sec.require_double("x_max");
    p.grid.n_cells = [&] {
      RawEntry* e = sec.find("n_cells");
      if (!e) throw ConfigError(sections["grid"].line, "[grid] is missing required key 'n_cells'");
      return to_int(*e);
    }();
    const std::string domain = sec.get_string("domain").value_or("line");
    if (domain == "line") {
      p.grid.domain_kind = DomainKind::TruncatedLine;
    } else if (domain == "half-line") {
      p.grid.domain_kind = DomainKind::HalfLine;
    } else {
      throw ConfigError(0, "domain must be 'line' or 'half-line'");
    }
    sec.finish();
  }
  {
    SectionView sec("boundary", sections["boundary"]);
    if (RawEntry* e = sec.find("s_left")) p.bc.S_left = parse_signal_bc(*e);
    if (RawEntry* e = sec.find("s_right")) p.bc.S_right = parse_signal_bc(*e);
    sec.finish();
  }
  {
    SectionView sec("init", sections["init"]);
    p.init = parse_init_section(sec);
    p.s_init = sec.require_double("s_init");
    sec.finish();
  }
  {
    SectionView sec("run", sections["run"]);
    p.config.t_end = sec.require_double("t_end");
    p.config.dt_max = sec.get_double("dt_max").value_or(0.1);
    p.config.cfl = sec.get_double("cfl").value_or(0.9);
    if (RawEntry* e = sec.find("clamp")) {
      if (e->value == "off") {
        p.config.clamp_epsilon.reset();
      } else {
        p.config.clamp_epsilon = to_double(*e);
      }
    }
    p.config.output_every = sec.get_double("output_every").value_or(0.5);
    const std::string ob = sec.get_string("on_breakdown").value_or("halt");
    if (ob == "halt") {
      p.config.breakdown_policy = BreakdownPolicy::Halt;
    } else if (ob == "clamp-continue") {
      p.config.breakdown_policy = BreakdownPolicy::ClampAndContinue;
    } else {
      throw ConfigError(0, "on_breakdown must be 'halt' or 'clamp-continue'");
    }
    sec.finish();
  }

  try {
    cross_validate(p);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(0, ex.what());
  }
  p.expected_speed = analytic_speed(p);
  return p;
}

FieldState build_initial_state(const ScenarioPreset& p) {
  const auto centers = p.grid.centers();
  return std::visit(
      overloaded{
          [&](const FromProfileDesc& f) {
            const double offset =
                f.offset.value_or(p.grid.x_min + (p.grid.x_max - p.grid.x_min) / 3.0);
            std::vector<double> z(centers.size());
            for (std::size_t i = 0; i < centers.size(); ++i) z[i] = centers[i] - offset;
            WaveProfile profile;
            if (f.profile == "ks") {
              const auto& lg = std::get<LogGradient>(p.model.sensitivity);
              const auto& cons = std::get<ConstantConsumption>(p.model.consumption);
              profile = ks_profile(p.model.d, lg.chi, cons.k, f.mass, p.s_init, std::move(z));
            } else if (f.profile == "two-signal") {
              profile = two_signal_profile(p.model, p.s_init, f.mass, std::move(z));
            } else {
              const auto& ts = std::get<ThresholdedSign>(p.model.sensitivity);
              const auto& g = std::get<ThresholdGrowth>(p.model.growth);
              const auto& cons = std::get<LinearConsumption>(p.model.consumption);
              const double c = gogrow_speed(ts.chi, g.r, p.model.d).c;
              profile = gogrow_profile(ts.chi, g.r, p.model.d, c, std::move(z), cons.k, ts.S_0);
            }
            return initial_condition(FromProfileInit{std::move(profile), offset}, p.grid,
                                     p.s_init);
          },
          [&](const SpikeDesc& s) {
            // zero-flux equilibrium rho = C S^{chi/d} with S'' = k rho / D:
            // S = S_b (1 + q x)^{-g}, g = 2 d / (chi - d), q = k M / (g D S_b)
            const auto& lg = std::get<LogGradient>(p.model.sensitivity);
            const auto& cons = std::get<ConstantConsumption>(p.model.consumption);
            const double beta_exp = lg.chi / p.model.d;
            const double g = 2.0 / (beta_exp - 1.0);
            const double S_b = p.bc.S_left.value;
            const double q = cons.k * s.mass / (g * p.model.D * S_b);
            CustomInit init;
            init.rho.resize(centers.size());
            init.S = std::vector<double>(centers.size());
            for (std::size_t i = 0; i < centers.size(); ++i) {
              const double x = centers[i] - p.grid.x_min;
              const double base = 1.0 + q * x;
              (*init.S)[i] = S_b * std::pow(base, -g);
              init.rho[i] = p.model.D / cons.k * g * (g + 1.0) * q * q * S_b *
                            std::pow(base, -g - 2.0);
            }
            return initial_condition(std::move(init), p.grid, p.s_init);
          },
          [&](const auto& plain) { return initial_condition(plain, p.grid, p.s_init); },
      },
      p.init);
}

std::optional<SpeedResult> analytic_speed(const ScenarioPreset& p) {
  const ModelSpec& m = p.model;
  if (const auto* s = std::get_if<BinaryTwoSignal>(&m.sensitivity)) {
    if (m.attractant) {
      return two_signal_speed(s->chi_S, s->chi_A, m.attractant->alpha, m.attractant->D_A);
    }
    return std::nullopt;
  }
  if (const auto* s = std::get_if<ThresholdedSign>(&m.sensitivity)) {
    if (const auto* g = std::get_if<ThresholdGrowth>(&m.growth)) {
      return gogrow_speed(s->chi, g->r, m.d);
    }
    return std::nullopt;
  }
  if (const auto* s = std::get_if<ThresholdedLogGradient>(&m.sensitivity)) {
    const auto* g = std::get_if<ThresholdGrowth>(&m.growth);
    if (g && m.D == 0.0 && p.s_init > s->S_0) {
      return logsens_speed(s->chi, g->r, m.d, p.s_init, s->S_0);
    }
    return std::nullopt;  // no analytic speed with signal diffusion
  }
  if (std::holds_alternative<LogGradient>(m.sensitivity) &&
      std::holds_alternative<NoGrowth>(m.growth) &&
      std::holds_alternative<ConstantConsumption>(m.consumption) &&
      p.grid.domain_kind == DomainKind::TruncatedLine) {
    const auto& cons = std::get<ConstantConsumption>(m.consumption);
    // speed law needs the actual initial mass
    const FieldState st = build_initial_state(p);
    double mass = 0.0;
    for (double v : st.rho) mass += v;
    mass *= p.grid.dx();
    if (mass > 0.0) return ks_speed(cons.k, mass, p.s_init);
  }
  return std::nullopt;
}

ScenarioPreset preset(const std::string& name) {
  ScenarioPreset p;
  p.name = name;

  const auto ks_model = [] {
    ModelSpec m;
    m.sensitivity = LogGradient{2.0};
    m.consumption = ConstantConsumption{1.0};
    m.growth = NoGrowth{};
    m.d = 1.0;
    m.D = 0.0;
    return m;
  };

  if (name == "ks-breakdown") {
    p.model = ks_model();
    p.grid = {0.0, 100.0, 1000, DomainKind::TruncatedLine};
    p.init = GaussianInit{20.0, 2.0, 5.0};
    p.s_init = 1.0;
    p.config.t_end = 5.0;
    p.config.output_every = 0.1;
    p.expected = OutcomeTag::Breakdown;
  } else if (name == "ks-aligned") {
    p.model = ks_model();
    p.grid = {0.0, 150.0, 1500, DomainKind::TruncatedLine};
    p.init = FromProfileDesc{"ks", 2.0, std::nullopt};
    p.s_init = 1.0;
    p.config.t_end = 10.0;
    p.config.output_every = 0.1;
    p.expected = OutcomeTag::Breakdown;
  } else if (name == "ks-rescued") {
    p.model = ks_model();
    p.grid = {0.0, 200.0, 2000, DomainKind::TruncatedLine};
    p.init = FromProfileDesc{"ks", 2.0, std::nullopt};
    p.s_init = 1.0;
    p.config.t_end = 50.0;
    p.config.output_every = 0.5;
    p.config.clamp_epsilon = 1e-12;
    p.expected = OutcomeTag::Rescued;
  } else if (name == "spike-stable" || name == "spike-breakdown") {
    p.model = ks_model();
    p.model.D = name == "spike-stable" ? 1.0 : 0.25;
    p.grid = {0.0, 30.0, 300, DomainKind::HalfLine};
    p.bc.S_left = SignalBC{SignalBCKind::Dirichlet, 1.0};
    p.s_init = 1.0;
    p.config.t_end = 20.0;
    p.config.output_every = 0.25;
    if (name == "spike-stable") {
      p.init = SpikeDesc{1.0};
      p.expected = OutcomeTag::StationarySpike;
    } else {
      p.init = GaussianInit{8.0, 1.5, 3.0};
      p.expected = OutcomeTag::Breakdown;
    }
  } else if (name == "two-signal") {
    // the two-signal parameters are repo defaults chosen so the implicit
    // root is interior: chi_S - chi_A < c < chi_S
    p.model.sensitivity = BinaryTwoSignal{2.0, 1.0};
    p.model.consumption = LinearConsumption{1.0};
    p.model.growth = NoGrowth{};
    p.model.d = 1.0;
    p.model.D = 0.0;
    p.model.attractant = AttractantSpec{1.0, 1.0, 1.0};
    p.grid = {0.0, 200.0, 2000, DomainKind::TruncatedLine};
    p.init = HalfGaussianInit{4.0, 6.0};
    p.s_init = 1.0;
    p.config.t_end = 60.0;
    p.config.output_every = 0.5;
    p.expected = OutcomeTag::TravelingWave;
  } else if (name == "gogrow") {
    p.model.sensitivity = ThresholdedSign{2.0, 2.0};
    p.model.consumption = LinearConsumption{1.0};
    p.model.growth = ThresholdGrowth{1.0, 2.0};
    p.model.d = 1.0;
    p.model.D = 0.0;
    p.grid = {0.0, 200.0, 2000, DomainKind::TruncatedLine};
    p.init = PlateauInit{10.0, 1.0};
    p.s_init = 8.0;
    p.config.t_end = 60.0;
    p.config.output_every = 0.5;
    p.expected = OutcomeTag::TravelingWave;
  } else if (name == "logsens" || name == "logsens-D1") {
    p.model.sensitivity = ThresholdedLogGradient{2.0, 2.0};
    p.model.consumption = LinearConsumption{1.0};
    p.model.growth = ThresholdGrowth{1.0, 2.0};
    p.model.d = 1.0;
    p.model.D = name == "logsens-D1" ? 1.0 : 0.0;
    p.grid = {0.0, 300.0, 3000, DomainKind::TruncatedLine};
    p.init = PlateauInit{10.0, 1.0};
    p.s_init = 8.0;
    p.config.t_end = 80.0;
    // pinned below the diffusive cap so refinement sweeps compare equal-dt
    // runs; the O(dt) splitting bias would otherwise swamp the dx trend
    p.config.dt_max = 0.001;
    p.config.output_every = 0.5;
    p.expected = OutcomeTag::TravelingWave;
  } else {
    throw ConfigError(0, "unknown preset '" + name + "'");
  }

  cross_validate(p);
  p.expected_speed = analytic_speed(p);
  return p;
}

std::vector<std::string> preset_names() {
  return {"ks-breakdown", "ks-aligned",      "ks-rescued", "spike-stable", "spike-breakdown",
          "two-signal",   "gogrow",          "logsens",    "logsens-D1"};
}

std::vector<std::string> parameter_paths() {
  return {"model.chi",   "model.chi_s", "model.chi_a", "model.f_scale", "model.s_0",
          "model.k",     "model.m",     "model.r",     "model.d",       "model.D",
          "model.D_A",   "model.alpha", "model.beta",  "init.s_init"};
}

void set_parameter(ScenarioPreset& p, const std::string& path, double value) {
  const auto fail = [&](const std::string& why) { throw ConfigError(0, why); };
  if (path == "model.chi") {
    if (auto* s = std::get_if<LogGradient>(&p.model.sensitivity)) s->chi = value;
    else if (auto* s = std::get_if<TanhSensitivity>(&p.model.sensitivity)) s->chi = value;
    else if (auto* s = std::get_if<ThresholdedSign>(&p.model.sensitivity)) s->chi = value;
    else if (auto* s = std::get_if<ThresholdedLogGradient>(&p.model.sensitivity)) s->chi = value;
    else fail("model.chi does not apply to the two-signal sensitivity");
  } else if (path == "model.chi_s") {
    if (auto* s = std::get_if<BinaryTwoSignal>(&p.model.sensitivity)) s->chi_S = value;
    else fail("model.chi_s applies to the two-signal sensitivity only");
  } else if (path == "model.chi_a") {
    if (auto* s = std::get_if<BinaryTwoSignal>(&p.model.sensitivity)) s->chi_A = value;
    else fail("model.chi_a applies to the two-signal sensitivity only");
  } else if (path == "model.f_scale") {
    if (auto* s = std::get_if<TanhSensitivity>(&p.model.sensitivity)) s->f_scale = value;
    else fail("model.f_scale applies to the tanh sensitivity only");
  } else if (path == "model.s_0") {
    bool any = false;
    if (auto* s = std::get_if<ThresholdedSign>(&p.model.sensitivity)) s->S_0 = value, any = true;
    if (auto* s = std::get_if<ThresholdedLogGradient>(&p.model.sensitivity))
      s->S_0 = value, any = true;
    if (auto* g = std::get_if<ThresholdGrowth>(&p.model.growth)) g->S_0 = value, any = true;
    if (!any) fail("model.s_0: the model has no threshold");
  } else if (path == "model.k") {
    std::visit([&](auto& c) { c.k = value; }, p.model.consumption);
  } else if (path == "model.m") {
    if (auto* c = std::get_if<PowerConsumption>(&p.model.consumption)) c->m = value;
    else fail("model.m applies to the power consumption kernel only");
  } else if (path == "model.r") {
    if (auto* g = std::get_if<ThresholdGrowth>(&p.model.growth)) g->r = value;
    else fail("model.r: the model has no growth term");
  } else if (path == "model.d") {
    p.model.d = value;
  } else if (path == "model.D") {
    p.model.D = value;
  } else if (path == "model.D_A") {
    if (p.model.attractant) p.model.attractant->D_A = value;
    else fail("model.D_A: the model has no attractant block");
  } else if (path == "model.alpha") {
    if (p.model.attractant) p.model.attractant->alpha = value;
    else fail("model.alpha: the model has no attractant block");
  } else if (path == "model.beta") {
    if (p.model.attractant) p.model.attractant->beta = value;
    else fail("model.beta: the model has no attractant block");
  } else if (path == "init.s_init") {
    p.s_init = value;
  } else {
    fail("unknown parameter path '" + path + "'");
  }
  p.model.validate();
  p.expected_speed = analytic_speed(p);
}

}  // namespace sgg
