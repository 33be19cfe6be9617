#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "liepulse/errors.hpp"
#include "liepulse/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitModel = 2;

struct Outcome {
  int code = kExitOk;
  std::string summary;
  std::string warnings;
  std::string errors;
};

void report_config_error(std::ostream& err, const std::string& source, const liepulse::ConfigError& e) {
  for (const auto& issue : e.issues()) err << "error: " << source << ": " << issue.location << ": " << issue.message << '\n';
}

Outcome run_one(const std::string& path, const liepulse::RunOptions& options, bool from_file) {
  Outcome out;
  std::ostringstream summary, warnings, errors;
  try {
    const auto config = from_file ? liepulse::load_config(path)
                                  : liepulse::parse_config(R"({"name": "demo", "objective": "transfer"})");
    liepulse::run_scenario(config, options, summary, warnings);
  } catch (const liepulse::ConfigError& e) {
    report_config_error(errors, path, e);
    out.code = kExitConfig;
  } catch (const liepulse::FormatError& e) {
    errors << "error: " << path << ": " << e.what() << '\n';
    out.code = kExitConfig;
  } catch (const std::exception& e) {
    // model, schedule and numerical failures
    errors << "error: " << path << ": " << e.what() << '\n';
    out.code = kExitModel;
  }
  out.summary = summary.str();
  out.warnings = warnings.str();
  out.errors = errors.str();
  return out;
}

std::vector<Outcome> run_batch(const std::vector<std::string>& paths, const liepulse::RunOptions& options,
                               unsigned jobs) {
  std::vector<Outcome> outcomes(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) outcomes[i] = run_one(paths[i], options, true);
  };
  const unsigned count = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(paths.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

int print(const std::vector<Outcome>& outcomes) {
  int code = kExitOk;
  for (const auto& o : outcomes) {
    std::cout << o.summary;
    std::cerr << o.warnings << o.errors;
    code = std::max(code, o.code);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse sequence compiler and simulator for N-level ladder systems"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string modes;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "Decompose, synthesize and simulate one or more scenarios");
  run->add_option("config", configs, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", modes, "Comma-separated subset of piecewise,rwa,labframe (overrides the config)");
  run->add_option("--out-dir", out_dir, "Directory for schedules, decompositions and traces");
  run->add_option("--seed", seed, "Seed for randomized pulse phases");
  run->add_option("-j,--jobs", jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario and print it with all defaults filled in");
  validate->add_option("config", validate_path, "Scenario JSON file")->required();

  auto* demo = app.add_subcommand("demo", "Run the 4-level Morse population transfer with default settings");
  demo->add_option("--out-dir", out_dir, "Directory for output files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  liepulse::RunOptions options;
  options.out_dir = out_dir;
  options.seed = seed;

  if (*run) {
    if (!modes.empty()) {
      std::stringstream ss(modes);
      for (std::string name; std::getline(ss, name, ',');) {
        const auto mode = liepulse::parse_mode(name);
        if (!mode) {
          std::cerr << "error: --mode: unknown mode '" << name << "'; expected piecewise, rwa or labframe\n";
          return kExitConfig;
        }
        options.modes.push_back(*mode);
      }
    }
    return print(run_batch(configs, options, jobs));
  }

  if (*validate) {
    try {
      std::cout << liepulse::to_json(liepulse::load_config(validate_path));
      return kExitOk;
    } catch (const liepulse::ConfigError& e) {
      report_config_error(std::cerr, validate_path, e);
      return kExitConfig;
    }
  }

  return print({run_one("demo", options, false)});
}
