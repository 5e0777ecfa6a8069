#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "semipress/config.hpp"

namespace semipress {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // invariant violations or an unexpected error
  kExitConfig = 2,
  kExitBudget = 3,
  kExitSolver = 4,
};

/// Command-line overrides applied on top of the config file.
struct RunOverrides {
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> budget_words;
};

/// Writes manifest.json, results.csv, dimension_report.json, lyapunov.csv and
/// boxcount.csv into cfg.out_dir. Errors propagate as exceptions.
void run_experiment(const ExperimentConfig& cfg, const std::string& config_file = "");

/// Runs the invariant battery and writes invariants.json. Requires a built-in system.
InvariantReport verify_experiment(const ExperimentConfig& cfg);

/// CLI entry points: load, override, run, and map failures to exit codes
/// (writing error.json into the output directory when it can be determined).
int run_command(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& log);
int verify_command(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& log);

}  // namespace semipress
