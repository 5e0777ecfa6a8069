#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semipress/errors.hpp"
#include "semipress/invariants.hpp"
#include "semipress/pressure.hpp"
#include "semipress/solver.hpp"

namespace semipress {

/// Rejected configuration. `field` is the dotted key at fault ("" for the
/// document as a whole).
class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string field, const std::string& what)
      : InvalidInput(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  // system.*
  std::string system_kind;  // builtin | circle_affine | cantor_k1 | custom_piecewise
  std::string system_name;
  std::vector<double> slopes;
  std::vector<double> offsets;
  std::string system_domain = "circle";                  // custom_piecewise only
  bool system_wrap = true;                               // custom_piecewise only
  std::vector<std::vector<AffinePiece>> pieces;          // custom_piecewise only
  int cantor_depth = 12;

  // potentials.*
  std::string potentials_kind = "zero";  // zero | log_factor | constant | scaled_log_factor
  std::vector<double> constants;
  double potentials_t = 0.0;

  // sample.*
  std::string sample_kind = "grid";  // grid | cantor | explicit
  int sample_resolution = 4096;
  int sample_depth = 10;
  std::vector<double> sample_points;
  double sample_mesh = 0.0;

  // schedule.*
  std::vector<int> depths;
  std::vector<double> deltas{0.2, 0.1, 0.05};
  std::vector<double> t_grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
  double tail_fraction = 0.25;

  CoverSettings cover;

  // dimension.*
  bool dimension = true;
  double solver_tol = 1e-3;
  int lyapunov_points = 256;
  double resolution_factor = 8.0;
  double box_base = 2.0;
  int box_first = 1;
  int box_last = 12;

  // battery.*
  double perturbation = 0.05;
  double shift = 0.37;
  double slope_tol = 0.02;

  std::uint64_t seed = 1;
  std::uint64_t word_budget = kDefaultWordBudget;
  int workers = 1;
  std::string out_dir = "out";
};

/// Flat YAML: a single mapping of dotted keys to scalars or flow lists.
/// Unknown keys and wrongly typed values throw ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

SemigroupSystem build_system(const ExperimentConfig& cfg);
SetSample build_sample(const ExperimentConfig& cfg, const SemigroupSystem& sys);
Potentials build_potentials(const ExperimentConfig& cfg, const SemigroupSystem& sys);

DimensionSettings dimension_settings(const ExperimentConfig& cfg);
BatterySettings battery_settings(const ExperimentConfig& cfg);

}  // namespace semipress
