#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "liepulse/decomposition.hpp"
#include "liepulse/pulses.hpp"
#include "liepulse/simulate.hpp"
#include "liepulse/system.hpp"

namespace liepulse {

struct MorseSpec {
  int levels = 4;
  double anharmonicity = 0.1;
  double omega0 = 1.0;
  double p12 = 1.0;
  friend bool operator==(const MorseSpec&, const MorseSpec&) = default;
};

struct ExplicitSystemSpec {
  std::vector<double> energies;
  std::vector<double> dipoles;
  friend bool operator==(const ExplicitSystemSpec&, const ExplicitSystemSpec&) = default;
};

using SystemSpec = std::variant<MorseSpec, ExplicitSystemSpec>;

enum class ObjectiveKind { transfer, invert, superpose, maximize, custom };
enum class PhaseChoice { zero, list, random };
enum class ObservableChoice { dipole, energy };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::transfer;
  // transfer / invert
  PhaseChoice phase_choice = PhaseChoice::zero;
  std::vector<double> phases;
  // superpose
  std::vector<double> amplitudes;
  std::vector<double> target_phases;
  // maximize
  ObservableChoice observable = ObservableChoice::dipole;
  // custom
  std::string unitary_file;  // relative paths resolve against the config's directory
  DecompositionMode mode = DecompositionMode::mod_phase;
  friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;
};

enum class InitialKind { ground, boltzmann, weights };

struct InitialSpec {
  InitialKind kind = InitialKind::ground;
  BoltzmannSign sign = BoltzmannSign::thermal;
  std::vector<double> weights;
  friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct TimingSpec {
  // exactly one is set after normalization
  std::optional<double> slot;
  std::optional<double> total_time;
  friend bool operator==(const TimingSpec&, const TimingSpec&) = default;
};

struct SimulationSpec {
  bool piecewise = true;
  std::optional<int> rwa_steps = kDefaultRwaSteps;
  std::optional<int> labframe_steps_per_period;
  friend bool operator==(const SimulationSpec&, const SimulationSpec&) = default;
};

struct OutputSpec {
  std::string schedule;       // file name
  std::string decomposition;  // file name
  std::string trace;          // stem; one <stem>.<mode>.csv per mode
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  SystemSpec system = MorseSpec{};
  ObjectiveSpec objective;
  InitialSpec initial;
  PulseShape shape = PulseShape::square_erf(30.0);
  TimingSpec timing;
  SimulationSpec simulation;
  OutputSpec outputs;
  std::filesystem::path base_dir;  // not serialized
  friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.name == b.name && a.system == b.system && a.objective == b.objective && a.initial == b.initial &&
           a.shape == b.shape && a.timing == b.timing && a.simulation == b.simulation && a.outputs == b.outputs;
  }
};

struct ConfigIssue {
  std::string location;  // JSON pointer, or "line L, column C" for syntax errors
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  ConfigError(std::string location, std::string message);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses and normalizes a JSON scenario, filling every default. Collects all
/// problems before throwing ConfigError.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

/// Normalized JSON text; parse_config(to_json(c)) == c.
std::string to_json(const ScenarioConfig& config);

SystemModel build_system(const ScenarioConfig& config);

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::vector<PropagationMode> modes;  // empty: whatever the config enables
  std::uint64_t seed = 0;
};

struct ModeSummary {
  PropagationMode mode = PropagationMode::piecewise;
  std::string metric;  // csv column the value comes from
  double value = 0.0;
  KinematicalBounds bounds;
  std::filesystem::path trace_file;
};

struct ScenarioResult {
  std::vector<ModeSummary> summaries;
  std::vector<std::filesystem::path> files;
};

/// Decompose, synthesize, simulate and write artifacts. Summary lines go to
/// `summary`, detuning-guard and model warnings to `warnings`. Throws
/// ConfigError, ModelError, ScheduleError, ArgumentError or NumericalError.
ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& summary,
                            std::ostream& warnings);

std::string to_string(PropagationMode mode);
std::optional<PropagationMode> parse_mode(const std::string& name);

}  // namespace liepulse
