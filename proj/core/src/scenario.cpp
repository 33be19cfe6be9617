#include "liepulse/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "liepulse/errors.hpp"
#include "liepulse/formats.hpp"
#include "liepulse/targets.hpp"

namespace liepulse {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kDefaultSlot = 200.0;
constexpr double kDefaultRiseTime = 30.0;

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid scenario config";
  for (const auto& i : issues) out += "\n  " + i.location + ": " + i.message;
  return out;
}

enum class Bound { any, positive, non_negative };

class Reader {
 public:
  std::vector<ConfigIssue> issues;

  void add(std::string location, std::string message) { issues.push_back({std::move(location), std::move(message)}); }

  void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) add(path + "/" + it.key(), "unknown key");
  }

  // A section is either a bare type string or an object with "type".
  std::optional<std::string> type_of(const json& v, const std::string& path,
                                     std::initializer_list<std::string_view> types) {
    std::string t;
    if (v.is_string()) {
      t = v.get<std::string>();
    } else if (v.is_object()) {
      if (!v.contains("type")) {
        add(path + "/type", "missing; expected one of " + list(types));
        return std::nullopt;
      }
      if (!v["type"].is_string()) {
        add(path + "/type", "must be a string");
        return std::nullopt;
      }
      t = v["type"].get<std::string>();
    } else {
      add(path, "must be a string or an object");
      return std::nullopt;
    }
    if (std::find(types.begin(), types.end(), t) == types.end()) {
      add(path + (v.is_object() ? "/type" : ""), "unknown type '" + t + "'; expected one of " + list(types));
      return std::nullopt;
    }
    return t;
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path, Bound bound) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const json& v = obj[key];
    const std::string where = path + "/" + key;
    if (!v.is_number()) {
      add(where, "must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      add(where, "must be finite");
      return std::nullopt;
    }
    if (bound == Bound::positive && !(x > 0.0)) {
      add(where, "must be positive, got " + format_number(x));
      return std::nullopt;
    }
    if (bound == Bound::non_negative && x < 0.0) {
      add(where, "must be non-negative, got " + format_number(x));
      return std::nullopt;
    }
    return x;
  }

  std::optional<int> integer(const json& obj, const std::string& key, const std::string& path, int minimum) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const json& v = obj[key];
    const std::string where = path + "/" + key;
    if (!v.is_number_integer()) {
      add(where, "must be an integer");
      return std::nullopt;
    }
    const auto x = v.get<long long>();
    if (x < minimum || x > 100000000) {
      add(where, "must be at least " + std::to_string(minimum) + ", got " + std::to_string(x));
      return std::nullopt;
    }
    return static_cast<int>(x);
  }

  std::optional<std::vector<double>> numbers(const json& obj, const std::string& key, const std::string& path,
                                             Bound bound) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    const json& v = obj[key];
    const std::string where = path + "/" + key;
    if (!v.is_array()) {
      add(where, "must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string at = where + "/" + std::to_string(i);
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        add(at, "must be a finite number");
        ok = false;
        continue;
      }
      const double x = v[i].get<double>();
      if (bound == Bound::positive && !(x > 0.0)) {
        add(at, "must be positive, got " + format_number(x));
        ok = false;
      } else if (bound == Bound::non_negative && x < 0.0) {
        add(at, "must be non-negative, got " + format_number(x));
        ok = false;
      }
      out.push_back(x);
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
    if (!obj[key].is_string() || obj[key].get<std::string>().empty()) {
      add(path + "/" + key, "must be a non-empty string");
      return std::nullopt;
    }
    return obj[key].get<std::string>();
  }

  void expect_size(const std::vector<double>& v, std::size_t n, const std::string& where, const std::string& what) {
    if (v.size() != n)
      add(where, "expected " + std::to_string(n) + " " + what + ", got " + std::to_string(v.size()));
  }

 private:
  static std::string list(std::initializer_list<std::string_view> items) {
    std::string out;
    for (auto s : items) out += (out.empty() ? "" : ", ") + std::string(s);
    return out;
  }
};

std::string location_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// Level count implied by the system section, if it is readable.
std::optional<std::size_t> level_count(const SystemSpec& s) {
  if (const auto* m = std::get_if<MorseSpec>(&s)) return m->levels >= 2 ? std::optional<std::size_t>(m->levels) : std::nullopt;
  const auto& e = std::get<ExplicitSystemSpec>(s);
  return e.energies.size() >= 2 ? std::optional<std::size_t>(e.energies.size()) : std::nullopt;
}

void parse_system(const json& root, ScenarioConfig& c, Reader& r) {
  if (!root.contains("system")) return;
  const json& v = root["system"];
  const auto type = r.type_of(v, "/system", {"morse", "explicit"});
  if (!type) return;
  const json obj = v.is_object() ? v : json::object();
  if (*type == "morse") {
    r.allow_keys(obj, "/system", {"type", "levels", "anharmonicity", "omega0", "p12"});
    MorseSpec m;
    if (auto x = r.integer(obj, "levels", "/system", 2)) m.levels = *x;
    if (auto x = r.number(obj, "anharmonicity", "/system", Bound::non_negative)) m.anharmonicity = *x;
    if (auto x = r.number(obj, "omega0", "/system", Bound::positive)) m.omega0 = *x;
    if (auto x = r.number(obj, "p12", "/system", Bound::positive)) m.p12 = *x;
    c.system = m;
  } else {
    r.allow_keys(obj, "/system", {"type", "energies", "dipoles"});
    ExplicitSystemSpec e;
    if (!obj.contains("energies")) r.add("/system/energies", "required for an explicit system");
    if (!obj.contains("dipoles")) r.add("/system/dipoles", "required for an explicit system");
    if (auto x = r.numbers(obj, "energies", "/system", Bound::any)) e.energies = *x;
    if (auto x = r.numbers(obj, "dipoles", "/system", Bound::positive)) e.dipoles = *x;
    if (obj.contains("energies") && e.energies.size() < 2) r.add("/system/energies", "need at least 2 levels");
    if (!e.energies.empty() && obj.contains("dipoles") && !e.dipoles.empty())
      r.expect_size(e.dipoles, e.energies.size() - 1, "/system/dipoles", "dipoles (one per transition)");
    c.system = e;
  }
}

void parse_phase_list(const json& obj, ObjectiveSpec& o, std::optional<std::size_t> expected, Reader& r) {
  if (!obj.contains("phases")) return;
  const json& p = obj["phases"];
  if (p.is_string()) {
    const auto s = p.get<std::string>();
    if (s == "zero")
      o.phase_choice = PhaseChoice::zero;
    else if (s == "random")
      o.phase_choice = PhaseChoice::random;
    else
      r.add("/objective/phases", "expected \"zero\", \"random\" or a list of numbers");
    return;
  }
  if (auto x = r.numbers(obj, "phases", "/objective", Bound::any)) {
    o.phase_choice = PhaseChoice::list;
    o.phases = *x;
    if (expected) r.expect_size(o.phases, *expected, "/objective/phases", "pulse phases");
  }
}

void parse_objective(const json& root, ScenarioConfig& c, Reader& r) {
  if (!root.contains("objective")) {
    r.add("/objective", "required; one of transfer, invert, superpose, maximize, custom");
    return;
  }
  const json& v = root["objective"];
  const auto type = r.type_of(v, "/objective", {"transfer", "invert", "superpose", "maximize", "custom"});
  if (!type) return;
  const json obj = v.is_object() ? v : json::object();
  const auto n = level_count(c.system);
  ObjectiveSpec& o = c.objective;
  if (*type == "transfer" || *type == "invert") {
    r.allow_keys(obj, "/objective", {"type", "phases"});
    o.kind = *type == "transfer" ? ObjectiveKind::transfer : ObjectiveKind::invert;
    std::optional<std::size_t> k;
    if (n) k = o.kind == ObjectiveKind::transfer ? *n - 1 : *n * (*n - 1) / 2;
    parse_phase_list(obj, o, k, r);
  } else if (*type == "superpose") {
    r.allow_keys(obj, "/objective", {"type", "amplitudes", "phases"});
    o.kind = ObjectiveKind::superpose;
    if (!obj.contains("amplitudes")) r.add("/objective/amplitudes", "required for superpose");
    if (auto x = r.numbers(obj, "amplitudes", "/objective", Bound::non_negative)) {
      o.amplitudes = *x;
      if (n) r.expect_size(o.amplitudes, *n, "/objective/amplitudes", "amplitudes (one per level)");
      double sum = 0.0;
      for (double a : o.amplitudes) sum += a * a;
      if (std::abs(sum - 1.0) > 1e-10)
        r.add("/objective/amplitudes", "squares must sum to 1, got " + format_number(sum, 12));
    }
    if (auto x = r.numbers(obj, "phases", "/objective", Bound::any)) {
      o.target_phases = *x;
      if (n) r.expect_size(o.target_phases, *n, "/objective/phases", "phases (one per level)");
    } else if (!obj.contains("phases")) {
      o.target_phases.assign(o.amplitudes.size(), 0.0);
    }
  } else if (*type == "maximize") {
    r.allow_keys(obj, "/objective", {"type", "observable"});
    o.kind = ObjectiveKind::maximize;
    if (auto s = r.string(obj, "observable", "/objective")) {
      if (*s == "dipole")
        o.observable = ObservableChoice::dipole;
      else if (*s == "energy")
        o.observable = ObservableChoice::energy;
      else
        r.add("/objective/observable", "expected \"dipole\" or \"energy\"");
    }
  } else {
    r.allow_keys(obj, "/objective", {"type", "unitary", "mode"});
    o.kind = ObjectiveKind::custom;
    if (auto s = r.string(obj, "unitary", "/objective")) {
      o.unitary_file = *s;
      const auto path = c.base_dir / *s;
      if (!std::filesystem::exists(path)) r.add("/objective/unitary", "file not found: " + path.string());
    } else if (!obj.contains("unitary")) {
      r.add("/objective/unitary", "required for custom");
    }
    if (auto s = r.string(obj, "mode", "/objective")) {
      if (*s == "mod_phase")
        o.mode = DecompositionMode::mod_phase;
      else if (*s == "exact")
        o.mode = DecompositionMode::exact;
      else
        r.add("/objective/mode", "expected \"mod_phase\" or \"exact\"");
    }
  }
}

void parse_initial(const json& root, ScenarioConfig& c, Reader& r) {
  if (!root.contains("initial")) return;
  const json& v = root["initial"];
  const auto type = r.type_of(v, "/initial", {"ground", "boltzmann", "weights"});
  if (!type) return;
  const json obj = v.is_object() ? v : json::object();
  InitialSpec& s = c.initial;
  if (*type == "ground") {
    r.allow_keys(obj, "/initial", {"type"});
    s.kind = InitialKind::ground;
  } else if (*type == "boltzmann") {
    r.allow_keys(obj, "/initial", {"type", "sign"});
    s.kind = InitialKind::boltzmann;
    if (auto x = r.string(obj, "sign", "/initial")) {
      if (*x == "thermal")
        s.sign = BoltzmannSign::thermal;
      else if (*x == "anti_thermal")
        s.sign = BoltzmannSign::anti_thermal;
      else
        r.add("/initial/sign", "expected \"thermal\" or \"anti_thermal\"");
    }
  } else {
    r.allow_keys(obj, "/initial", {"type", "weights"});
    s.kind = InitialKind::weights;
    if (!obj.contains("weights")) r.add("/initial/weights", "required for explicit weights");
    if (auto x = r.numbers(obj, "weights", "/initial", Bound::non_negative)) {
      s.weights = *x;
      if (const auto n = level_count(c.system)) r.expect_size(s.weights, *n, "/initial/weights", "weights");
      double sum = 0.0;
      for (double w : s.weights) {
        sum += w;
        if (w > 1.0) r.add("/initial/weights", "weights must lie in [0, 1]");
      }
      if (std::abs(sum - 1.0) > 1e-12) r.add("/initial/weights", "must sum to 1, got " + format_number(sum, 15));
    }
  }
}

void parse_shape(const json& root, ScenarioConfig& c, Reader& r) {
  if (!root.contains("shape")) return;
  const json& v = root["shape"];
  const auto type = r.type_of(v, "/shape", {"square", "gaussian"});
  if (!type) return;
  const json obj = v.is_object() ? v : json::object();
  if (*type == "square") {
    r.allow_keys(obj, "/shape", {"type", "tau0"});
    c.shape = PulseShape::square_erf(kDefaultRiseTime);
    if (auto x = r.number(obj, "tau0", "/shape", Bound::positive)) c.shape.rise_time = *x;
  } else {
    r.allow_keys(obj, "/shape", {"type", "q"});
    c.shape = PulseShape::gaussian();
    if (obj.contains("q") && obj["q"].is_string()) {
      if (obj["q"].get<std::string>() != "auto") r.add("/shape/q", "expected \"auto\" or a positive number");
    } else if (auto x = r.number(obj, "q", "/shape", Bound::positive)) {
      c.shape.shape_factor = *x;
    }
  }
}

void parse_timing(const json& root, ScenarioConfig& c, Reader& r) {
  if (root.contains("timing")) {
    const json& v = root["timing"];
    if (!v.is_object()) {
      r.add("/timing", "must be an object with \"slot\" or \"total_time\"");
    } else {
      r.allow_keys(v, "/timing", {"slot", "total_time"});
      if (v.contains("slot") && v.contains("total_time"))
        r.add("/timing", "give either \"slot\" or \"total_time\", not both");
      c.timing.slot = r.number(v, "slot", "/timing", Bound::positive);
      c.timing.total_time = r.number(v, "total_time", "/timing", Bound::positive);
    }
  }
  if (!c.timing.slot && !c.timing.total_time) c.timing.slot = kDefaultSlot;
  if (c.timing.slot && c.shape.kind == EnvelopeKind::square_erf && *c.timing.slot < 2.0 * c.shape.rise_time)
    r.add("/timing/slot", "slot " + format_number(*c.timing.slot, 12) + " is shorter than 2*tau0 = " +
                              format_number(2.0 * c.shape.rise_time, 12));
}

void parse_simulation(const json& root, ScenarioConfig& c, Reader& r) {
  if (!root.contains("simulation")) return;
  const json& v = root["simulation"];
  if (!v.is_object()) {
    r.add("/simulation", "must be an object");
    return;
  }
  r.allow_keys(v, "/simulation", {"piecewise", "rwa", "labframe"});
  SimulationSpec& s = c.simulation;
  if (v.contains("piecewise")) {
    if (v["piecewise"].is_boolean())
      s.piecewise = v["piecewise"].get<bool>();
    else
      r.add("/simulation/piecewise", "must be true or false");
  }
  auto mode = [&](const char* key, const char* steps_key, int def, int minimum, std::optional<int>& out) {
    if (!v.contains(key)) return;
    const json& m = v[key];
    const std::string path = std::string("/simulation/") + key;
    if (m.is_boolean()) {
      out = m.get<bool>() ? std::optional<int>(def) : std::nullopt;
    } else if (m.is_object()) {
      r.allow_keys(m, path, {steps_key});
      out = def;
      if (auto x = r.integer(m, steps_key, path, minimum)) out = *x;
    } else {
      r.add(path, std::string("must be false, true or {\"") + steps_key + "\": n}");
    }
  };
  mode("rwa", "steps", kDefaultRwaSteps, kMinRwaSteps, s.rwa_steps);
  mode("labframe", "steps_per_period", kDefaultStepsPerPeriod, kMinStepsPerPeriod, s.labframe_steps_per_period);
  if (!s.piecewise && !s.rwa_steps && !s.labframe_steps_per_period)
    r.add("/simulation", "enable at least one of piecewise, rwa, labframe");
}

void parse_outputs(const json& root, ScenarioConfig& c, Reader& r) {
  if (root.contains("outputs")) {
    const json& v = root["outputs"];
    if (!v.is_object()) {
      r.add("/outputs", "must be an object");
    } else {
      r.allow_keys(v, "/outputs", {"schedule", "decomposition", "trace"});
      if (auto s = r.string(v, "schedule", "/outputs")) c.outputs.schedule = *s;
      if (auto s = r.string(v, "decomposition", "/outputs")) c.outputs.decomposition = *s;
      if (auto s = r.string(v, "trace", "/outputs")) c.outputs.trace = *s;
    }
  }
  if (c.outputs.schedule.empty()) c.outputs.schedule = c.name + ".schedule.txt";
  if (c.outputs.decomposition.empty()) c.outputs.decomposition = c.name + ".decomposition.txt";
  if (c.outputs.trace.empty()) c.outputs.trace = c.name;
}

ScenarioConfig parse_root(const json& root, const std::filesystem::path& base_dir, const std::string& default_name) {
  Reader r;
  ScenarioConfig c;
  c.base_dir = base_dir;
  c.name = default_name;
  if (!root.is_object()) throw ConfigError("/", "scenario must be a JSON object");
  r.allow_keys(root, "", {"name", "system", "objective", "initial", "shape", "timing", "simulation", "outputs"});
  if (auto s = r.string(root, "name", "")) {
    const bool ok = std::all_of(s->begin(), s->end(), [](unsigned char ch) {
      return std::isalnum(ch) || ch == '_' || ch == '-' || ch == '.';
    });
    if (ok)
      c.name = *s;
    else
      r.add("/name", "may only contain letters, digits, '_', '-' and '.'");
  }
  parse_system(root, c, r);
  parse_objective(root, c, r);
  parse_initial(root, c, r);
  parse_shape(root, c, r);
  parse_timing(root, c, r);
  parse_simulation(root, c, r);
  parse_outputs(root, c, r);
  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return c;
}

ScenarioConfig parse_text(const std::string& text, const std::filesystem::path& base_dir,
                          const std::string& default_name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    // drop the library's "[json.exception...] parse error at line L, column C: " prefix
    if (const auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ConfigError(location_of(text, e.byte), "syntax error: " + msg);
  }
  return parse_root(root, base_dir, default_name);
}

ordered_json phases_json(const ObjectiveSpec& o) {
  switch (o.phase_choice) {
    case PhaseChoice::zero:
      return "zero";
    case PhaseChoice::random:
      return "random";
    case PhaseChoice::list:
      break;
  }
  return o.phases;
}

std::vector<double> draw_phases(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
  std::vector<double> out(count);
  for (auto& p : out) p = dist(rng);
  return out;
}

EnsembleState build_initial(const ScenarioConfig& c, const SystemModel& system) {
  switch (c.initial.kind) {
    case InitialKind::ground:
      return EnsembleState::ground(system.levels());
    case InitialKind::boltzmann:
      return boltzmann_ensemble(system, c.initial.sign);
    case InitialKind::weights:
      if (c.initial.weights.size() != system.levels())
        throw ConfigError("/initial/weights", "expected one weight per level");
      return EnsembleState::diagonal(c.initial.weights);
  }
  throw ArgumentError("unknown initial state kind");
}

Observable projector(std::span<const Complex> psi) {
  const std::size_t n = psi.size();
  ComplexMatrix p(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) p(r, c) = psi[r] * std::conj(psi[c]);
  return Observable{p, false, {}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("/outputs", "cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("/outputs", "failed writing " + path.string());
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string location, std::string message)
    : ConfigError(std::vector<ConfigIssue>{{std::move(location), std::move(message)}}) {}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  return parse_text(text, base_dir, "scenario");
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path.parent_path(), path.stem().string());
}

std::string to_json(const ScenarioConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  if (const auto* m = std::get_if<MorseSpec>(&c.system)) {
    j["system"] = {{"type", "morse"},
                   {"levels", m->levels},
                   {"anharmonicity", m->anharmonicity},
                   {"omega0", m->omega0},
                   {"p12", m->p12}};
  } else {
    const auto& e = std::get<ExplicitSystemSpec>(c.system);
    j["system"] = {{"type", "explicit"}, {"energies", e.energies}, {"dipoles", e.dipoles}};
  }

  const ObjectiveSpec& o = c.objective;
  ordered_json obj;
  switch (o.kind) {
    case ObjectiveKind::transfer:
    case ObjectiveKind::invert:
      obj["type"] = o.kind == ObjectiveKind::transfer ? "transfer" : "invert";
      obj["phases"] = phases_json(o);
      break;
    case ObjectiveKind::superpose:
      obj["type"] = "superpose";
      obj["amplitudes"] = o.amplitudes;
      obj["phases"] = o.target_phases;
      break;
    case ObjectiveKind::maximize:
      obj["type"] = "maximize";
      obj["observable"] = o.observable == ObservableChoice::dipole ? "dipole" : "energy";
      break;
    case ObjectiveKind::custom:
      obj["type"] = "custom";
      obj["unitary"] = o.unitary_file;
      obj["mode"] = o.mode == DecompositionMode::exact ? "exact" : "mod_phase";
      break;
  }
  j["objective"] = obj;

  switch (c.initial.kind) {
    case InitialKind::ground:
      j["initial"] = {{"type", "ground"}};
      break;
    case InitialKind::boltzmann:
      j["initial"] = {{"type", "boltzmann"},
                      {"sign", c.initial.sign == BoltzmannSign::anti_thermal ? "anti_thermal" : "thermal"}};
      break;
    case InitialKind::weights:
      j["initial"] = {{"type", "weights"}, {"weights", c.initial.weights}};
      break;
  }

  if (c.shape.kind == EnvelopeKind::square_erf) {
    j["shape"] = {{"type", "square"}, {"tau0", c.shape.rise_time}};
  } else {
    j["shape"] = {{"type", "gaussian"}};
    if (c.shape.shape_factor)
      j["shape"]["q"] = *c.shape.shape_factor;
    else
      j["shape"]["q"] = "auto";
  }

  j["timing"] = ordered_json::object();
  if (c.timing.slot) j["timing"]["slot"] = *c.timing.slot;
  if (c.timing.total_time) j["timing"]["total_time"] = *c.timing.total_time;

  ordered_json sim;
  sim["piecewise"] = c.simulation.piecewise;
  if (c.simulation.rwa_steps)
    sim["rwa"] = {{"steps", *c.simulation.rwa_steps}};
  else
    sim["rwa"] = false;
  if (c.simulation.labframe_steps_per_period)
    sim["labframe"] = {{"steps_per_period", *c.simulation.labframe_steps_per_period}};
  else
    sim["labframe"] = false;
  j["simulation"] = sim;

  j["outputs"] = {{"schedule", c.outputs.schedule},
                  {"decomposition", c.outputs.decomposition},
                  {"trace", c.outputs.trace}};
  return j.dump(2) + "\n";
}

SystemModel build_system(const ScenarioConfig& c) {
  if (const auto* m = std::get_if<MorseSpec>(&c.system))
    return morse_system(m->levels, m->anharmonicity, m->omega0, m->p12);
  const auto& e = std::get<ExplicitSystemSpec>(c.system);
  return SystemModel(e.energies, e.dipoles);
}

std::string to_string(PropagationMode mode) {
  switch (mode) {
    case PropagationMode::piecewise:
      return "piecewise";
    case PropagationMode::rwa:
      return "rwa";
    case PropagationMode::labframe:
      return "labframe";
  }
  return "unknown";
}

std::optional<PropagationMode> parse_mode(const std::string& name) {
  if (name == "piecewise") return PropagationMode::piecewise;
  if (name == "rwa") return PropagationMode::rwa;
  if (name == "labframe") return PropagationMode::labframe;
  return std::nullopt;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& summary,
                            std::ostream& warnings) {
  const SystemModel system = build_system(config);
  const std::size_t n = system.levels();
  for (const auto& w : system.warnings()) warnings << config.name << ": warning: " << w << '\n';

  const EnsembleState s0 = build_initial(config, system);
  const ObjectiveSpec& o = config.objective;

  DecompositionResult d;
  TraceTargets targets;
  std::string metric = "energy";
  Observable metric_observable = energy_observable(system);

  auto pulse_phases = [&](std::size_t count) -> std::optional<std::vector<double>> {
    switch (o.phase_choice) {
      case PhaseChoice::zero:
        return std::nullopt;
      case PhaseChoice::random:
        return draw_phases(count, options.seed);
      case PhaseChoice::list:
        if (o.phases.size() != count)
          throw ConfigError("/objective/phases", "expected " + std::to_string(count) + " pulse phases");
        return o.phases;
    }
    return std::nullopt;
  };

  switch (o.kind) {
    case ObjectiveKind::transfer: {
      d = target_population_transfer(system, pulse_phases(system.transitions()));
      metric = "p" + std::to_string(n);
      ComplexVector last(n, 0.0);
      last[n - 1] = 1.0;
      metric_observable = projector(last);
      break;
    }
    case ObjectiveKind::invert:
      d = target_inversion(system, pulse_phases(n * (n - 1) / 2));
      break;
    case ObjectiveKind::superpose: {
      if (o.amplitudes.size() != n)
        throw ConfigError("/objective/amplitudes", "expected one amplitude per level");
      auto st = target_superposition(o.amplitudes, o.target_phases, system);
      d = std::move(st.decomposition);
      metric = "overlap";
      metric_observable = projector(st.state);
      targets.target_state = std::move(st.state);
      break;
    }
    case ObjectiveKind::maximize: {
      Observable obs =
          o.observable == ObservableChoice::dipole ? transition_dipole_observable(system) : energy_observable(system);
      d = decompose(target_observable_max(obs, s0), DecompositionMode::mod_phase);
      metric = "observable";
      metric_observable = obs;
      targets.observable = std::move(obs);
      break;
    }
    case ObjectiveKind::custom: {
      const auto path = config.base_dir / o.unitary_file;
      std::ifstream in(path);
      if (!in) throw ConfigError("/objective/unitary", "cannot open " + path.string());
      ComplexMatrix u;
      try {
        u = read_unitary_text(in);
      } catch (const FormatError& e) {
        throw ConfigError("/objective/unitary", path.string() + ": " + e.what());
      }
      if (u.dim() != n)
        throw ConfigError("/objective/unitary", "matrix is " + std::to_string(u.dim()) + "x" +
                                                      std::to_string(u.dim()) + " but the system has " +
                                                      std::to_string(n) + " levels");
      d = decompose(u, o.mode);
      break;
    }
  }

  const double total_time = config.timing.total_time
                                ? *config.timing.total_time
                                : *config.timing.slot * static_cast<double>(d.factors.size());
  const PulseSchedule schedule = synthesize(d, system, config.shape, total_time);
  for (const auto& g : schedule.warnings) {
    const Pulse& p = schedule.pulses[g.pulse];
    warnings << config.name << ": warning: pulse " << g.pulse + 1 << " (transition " << p.transition
             << ") detuning margin " << format_number(g.margin, 4) << " < " << kGuardMarginThreshold
             << "; off-resonant transitions will be driven\n";
  }

  std::filesystem::create_directories(options.out_dir);
  ScenarioResult result;
  {
    std::ostringstream ss;
    write_decomposition(ss, d);
    const auto path = options.out_dir / config.outputs.decomposition;
    write_file(path, ss.str());
    result.files.push_back(path);
  }
  {
    std::ostringstream ss;
    write_schedule(ss, schedule, system);
    const auto path = options.out_dir / config.outputs.schedule;
    write_file(path, ss.str());
    result.files.push_back(path);
  }

  std::vector<PropagationMode> modes = options.modes;
  if (modes.empty()) {
    if (config.simulation.piecewise) modes.push_back(PropagationMode::piecewise);
    if (config.simulation.rwa_steps) modes.push_back(PropagationMode::rwa);
    if (config.simulation.labframe_steps_per_period) modes.push_back(PropagationMode::labframe);
  }

  const KinematicalBounds bounds = kinematical_bounds(metric_observable, s0);
  for (PropagationMode mode : modes) {
    SimulationTrace trace = [&] {
      switch (mode) {
        case PropagationMode::rwa:
          return propagate_rwa(schedule, system, s0, config.simulation.rwa_steps.value_or(kDefaultRwaSteps));
        case PropagationMode::labframe:
          return propagate_labframe(schedule, system, s0,
                                    config.simulation.labframe_steps_per_period.value_or(kDefaultStepsPerPeriod));
        case PropagationMode::piecewise:
          break;
      }
      return piecewise_trace(d, system, s0, total_time);
    }();
    trace = trace_metrics(std::move(trace), system, targets);

    std::ostringstream ss;
    write_trace_csv(ss, trace);
    const auto path = options.out_dir / (config.outputs.trace + "." + to_string(mode) + ".csv");
    write_file(path, ss.str());
    result.files.push_back(path);

    ModeSummary s;
    s.mode = mode;
    s.metric = metric;
    s.bounds = bounds;
    s.trace_file = path;
    if (metric == "energy")
      s.value = trace.energy.back();
    else if (metric == "observable")
      s.value = trace.observable->back();
    else if (metric == "overlap")
      s.value = trace.overlap->back();
    else
      s.value = trace.populations.back()[n - 1];
    summary << config.name << ' ' << to_string(mode) << ": " << metric << " = " << format_number(s.value, 12)
            << " (kinematical range [" << format_number(bounds.min, 12) << ", " << format_number(bounds.max, 12)
            << "])\n";
    result.summaries.push_back(std::move(s));
  }
  return result;
}

}  // namespace liepulse
