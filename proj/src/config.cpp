#include "semipress/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace semipress {

namespace {

double parse_number(const YAML::Node& node, const std::string& key) {
  if (!node.IsScalar()) throw ConfigError(key, "expected a number");
  const std::string text = node.Scalar();
  try {
    // plain decimals, plus "p/q" so triadic schedules can be written exactly
    const auto slash = text.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
      std::size_t un = 0, ud = 0;
      const double p = std::stod(num, &un), q = std::stod(den, &ud);
      if (un == num.size() && ud == den.size() && q != 0.0) return p / q;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(key, "expected a number, got '" + text + "'");
}

template <class T>
T parse_scalar(const YAML::Node& node, const std::string& key, const char* type) {
  if (!node.IsScalar()) throw ConfigError(key, std::string("expected ") + type);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(key, std::string("expected ") + type + ", got '" + node.Scalar() + "'");
  }
}

std::vector<double> parse_numbers(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(key, "expected a list of numbers");
  std::vector<double> out;
  for (const auto& item : node) out.push_back(parse_number(item, key));
  return out;
}

std::vector<int> parse_ints(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) throw ConfigError(key, "expected a list of integers");
  std::vector<int> out;
  for (const auto& item : node) out.push_back(parse_scalar<int>(item, key, "an integer"));
  return out;
}

std::vector<std::vector<AffinePiece>> parse_pieces(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(key, "expected a list of generators");
  std::vector<std::vector<AffinePiece>> out;
  for (const auto& gen : node) {
    if (!gen.IsSequence() || gen.size() == 0) throw ConfigError(key, "each generator is a list of [lo, hi, slope, offset]");
    std::vector<AffinePiece> pieces;
    for (const auto& piece : gen) {
      const auto v = parse_numbers(piece, key);
      if (v.size() != 4) throw ConfigError(key, "each piece needs exactly [lo, hi, slope, offset]");
      pieces.push_back({v[0], v[1], v[2], v[3]});
    }
    out.push_back(std::move(pieces));
  }
  return out;
}

using Setter = std::function<void(const YAML::Node&, const std::string&, ExperimentConfig&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  using N = const YAML::Node&;
  using K = const std::string&;
  using C = ExperimentConfig&;
  static const std::vector<std::pair<std::string, Setter>> table{
      {"system.kind", [](N n, K k, C c) { c.system_kind = parse_scalar<std::string>(n, k, "a string"); }},
      {"system.name", [](N n, K k, C c) { c.system_name = parse_scalar<std::string>(n, k, "a string"); }},
      {"system.slopes", [](N n, K k, C c) { c.slopes = parse_numbers(n, k); }},
      {"system.offsets", [](N n, K k, C c) { c.offsets = parse_numbers(n, k); }},
      {"system.domain", [](N n, K k, C c) { c.system_domain = parse_scalar<std::string>(n, k, "a string"); }},
      {"system.wrap", [](N n, K k, C c) { c.system_wrap = parse_scalar<bool>(n, k, "a boolean"); }},
      {"system.pieces", [](N n, K k, C c) { c.pieces = parse_pieces(n, k); }},
      {"system.cantor_depth", [](N n, K k, C c) { c.cantor_depth = parse_scalar<int>(n, k, "an integer"); }},
      {"potentials.kind", [](N n, K k, C c) { c.potentials_kind = parse_scalar<std::string>(n, k, "a string"); }},
      {"potentials.constants", [](N n, K k, C c) { c.constants = parse_numbers(n, k); }},
      {"potentials.t", [](N n, K k, C c) { c.potentials_t = parse_number(n, k); }},
      {"sample.kind", [](N n, K k, C c) { c.sample_kind = parse_scalar<std::string>(n, k, "a string"); }},
      {"sample.resolution", [](N n, K k, C c) { c.sample_resolution = parse_scalar<int>(n, k, "an integer"); }},
      {"sample.depth", [](N n, K k, C c) { c.sample_depth = parse_scalar<int>(n, k, "an integer"); }},
      {"sample.points", [](N n, K k, C c) { c.sample_points = parse_numbers(n, k); }},
      {"sample.mesh", [](N n, K k, C c) { c.sample_mesh = parse_number(n, k); }},
      {"schedule.depths", [](N n, K k, C c) { c.depths = parse_ints(n, k); }},
      {"schedule.deltas", [](N n, K k, C c) { c.deltas = parse_numbers(n, k); }},
      {"schedule.t_grid", [](N n, K k, C c) { c.t_grid = parse_numbers(n, k); }},
      {"schedule.tail_fraction", [](N n, K k, C c) { c.tail_fraction = parse_number(n, k); }},
      {"cover.variant",
       [](N n, K k, C c) {
         try {
           c.cover.variant = parse_variant(parse_scalar<std::string>(n, k, "a string"));
         } catch (const ConfigError&) {
           throw;
         } catch (const InvalidInput& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"cover.strategy",
       [](N n, K k, C c) {
         try {
           c.cover.strategy = parse_strategy(parse_scalar<std::string>(n, k, "a string"));
         } catch (const ConfigError&) {
           throw;
         } catch (const InvalidInput& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"cover.reference_resolution",
       [](N n, K k, C c) { c.cover.reference_resolution = parse_scalar<int>(n, k, "an integer"); }},
      {"cover.sup_probes", [](N n, K k, C c) { c.cover.sup_probes = parse_scalar<int>(n, k, "an integer"); }},
      {"cover.modulus_probes", [](N n, K k, C c) { c.cover.modulus_probes = parse_scalar<int>(n, k, "an integer"); }},
      {"dimension.enabled", [](N n, K k, C c) { c.dimension = parse_scalar<bool>(n, k, "a boolean"); }},
      {"dimension.tol", [](N n, K k, C c) { c.solver_tol = parse_number(n, k); }},
      {"dimension.lyapunov_points", [](N n, K k, C c) { c.lyapunov_points = parse_scalar<int>(n, k, "an integer"); }},
      {"dimension.resolution_factor", [](N n, K k, C c) { c.resolution_factor = parse_number(n, k); }},
      {"box.base", [](N n, K k, C c) { c.box_base = parse_number(n, k); }},
      {"box.first", [](N n, K k, C c) { c.box_first = parse_scalar<int>(n, k, "an integer"); }},
      {"box.last", [](N n, K k, C c) { c.box_last = parse_scalar<int>(n, k, "an integer"); }},
      {"battery.perturbation", [](N n, K k, C c) { c.perturbation = parse_number(n, k); }},
      {"battery.shift", [](N n, K k, C c) { c.shift = parse_number(n, k); }},
      {"battery.slope_tol", [](N n, K k, C c) { c.slope_tol = parse_number(n, k); }},
      {"seed", [](N n, K k, C c) { c.seed = parse_scalar<std::uint64_t>(n, k, "a nonnegative integer"); }},
      {"budget.words",
       [](N n, K k, C c) { c.word_budget = parse_scalar<std::uint64_t>(n, k, "a positive integer"); }},
      {"run.workers", [](N n, K k, C c) { c.workers = parse_scalar<int>(n, k, "an integer"); }},
      {"output.dir", [](N n, K k, C c) { c.out_dir = parse_scalar<std::string>(n, k, "a string"); }},
  };
  return table;
}

template <class T, class Cmp>
void require_monotone(const std::vector<T>& v, const std::string& key, Cmp before, const char* what) {
  if (v.empty()) throw ConfigError(key, "must be nonempty");
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!before(v[i - 1], v[i])) throw ConfigError(key, std::string("must be strictly ") + what);
  }
}

void validate(const ExperimentConfig& c) {
  static const std::vector<std::string> kinds{"builtin", "circle_affine", "cantor_k1", "custom_piecewise"};
  if (c.system_kind.empty()) throw ConfigError("system.kind", "required");
  if (std::find(kinds.begin(), kinds.end(), c.system_kind) == kinds.end()) {
    throw ConfigError("system.kind", "unknown kind '" + c.system_kind + "'");
  }
  if (c.cantor_depth < 1 || c.cantor_depth > 30) throw ConfigError("system.cantor_depth", "must lie in [1, 30]");

  static const std::vector<std::string> pot{"zero", "log_factor", "constant", "scaled_log_factor"};
  if (std::find(pot.begin(), pot.end(), c.potentials_kind) == pot.end()) {
    throw ConfigError("potentials.kind", "unknown kind '" + c.potentials_kind + "'");
  }

  if (c.sample_kind == "grid") {
    if (c.sample_resolution < 1) throw ConfigError("sample.resolution", "must be positive");
  } else if (c.sample_kind == "cantor") {
    if (c.sample_depth < 1) throw ConfigError("sample.depth", "must be positive");
  } else if (c.sample_kind == "explicit") {
    if (c.sample_points.empty()) throw ConfigError("sample.points", "must be nonempty");
    if (!(c.sample_mesh > 0.0)) throw ConfigError("sample.mesh", "must be positive");
  } else {
    throw ConfigError("sample.kind", "unknown kind '" + c.sample_kind + "'");
  }

  if (c.depths.empty()) throw ConfigError("schedule.depths", "required");
  require_monotone(c.depths, "schedule.depths", std::less<>(), "increasing");
  if (c.depths.front() < 1) throw ConfigError("schedule.depths", "depths must be at least 1");
  require_monotone(c.deltas, "schedule.deltas", std::greater<>(), "decreasing");
  if (!(c.deltas.back() > 0.0) || c.deltas.front() > 0.5) {
    throw ConfigError("schedule.deltas", "deltas must lie in (0, 0.5]");
  }
  require_monotone(c.t_grid, "schedule.t_grid", std::less<>(), "increasing");
  if (c.t_grid.front() < 0.0) throw ConfigError("schedule.t_grid", "t must be nonnegative");
  if (!(c.tail_fraction > 0.0 && c.tail_fraction <= 1.0)) {
    throw ConfigError("schedule.tail_fraction", "must lie in (0, 1]");
  }

  if (c.cover.reference_resolution < 16) throw ConfigError("cover.reference_resolution", "must be at least 16");
  if (c.cover.sup_probes < 0) throw ConfigError("cover.sup_probes", "must be nonnegative");
  if (c.cover.modulus_probes < 2) throw ConfigError("cover.modulus_probes", "must be at least 2");
  if (!(c.solver_tol > 0.0)) throw ConfigError("dimension.tol", "must be positive");
  if (c.lyapunov_points < 1) throw ConfigError("dimension.lyapunov_points", "must be positive");
  if (!(c.resolution_factor > 0.0)) throw ConfigError("dimension.resolution_factor", "must be positive");
  if (!(c.box_base > 1.0)) throw ConfigError("box.base", "must exceed 1");
  if (c.box_first > c.box_last) throw ConfigError("box.last", "must be at least box.first");
  if (!(c.perturbation >= 0.0)) throw ConfigError("battery.perturbation", "must be nonnegative");
  if (!(c.slope_tol >= 0.0)) throw ConfigError("battery.slope_tol", "must be nonnegative");
  if (c.word_budget == 0) throw ConfigError("budget.words", "must be positive");
  if (c.workers < 1) throw ConfigError("run.workers", "must be positive");
  if (c.out_dir.empty()) throw ConfigError("output.dir", "must be nonempty");

  // Building the pieces checks the system fields and the potential count.
  const auto sys = build_system(c);
  build_potentials(c, sys);
  build_sample(c, sys);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("malformed YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "config must be a mapping of dotted keys");
  ExperimentConfig cfg;
  std::map<std::string, const Setter*> index;
  for (const auto& [key, fn] : setters()) index.emplace(key, &fn);
  for (const auto& entry : root) {
    if (!entry.first.IsScalar()) throw ConfigError("", "keys must be plain strings");
    const std::string key = entry.first.Scalar();
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError(key, "unknown key");
    (*it->second)(entry.second, key, cfg);
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SemigroupSystem build_system(const ExperimentConfig& c) {
  const std::uint64_t budget = c.word_budget;
  if (c.system_kind == "builtin") {
    if (c.system_name == "cantor_k1") return catalog::cantor_k1(c.cantor_depth).with_budget(budget);
    const auto names = catalog::names();
    if (std::find(names.begin(), names.end(), c.system_name) == names.end()) {
      throw ConfigError("system.name", "unknown built-in system '" + c.system_name + "'");
    }
    return catalog::by_name(c.system_name).with_budget(budget);
  }
  if (c.system_kind == "cantor_k1") return catalog::cantor_k1(c.cantor_depth).with_budget(budget);

  const std::string name = c.system_name.empty() ? c.system_kind : c.system_name;
  std::vector<PiecewiseAffineMap> gens;
  if (c.system_kind == "circle_affine") {
    if (c.slopes.empty()) throw ConfigError("system.slopes", "required for circle_affine");
    const std::vector<double> offsets = c.offsets.empty() ? std::vector<double>(c.slopes.size(), 0.0) : c.offsets;
    if (offsets.size() != c.slopes.size()) throw ConfigError("system.offsets", "must have one entry per slope");
    for (std::size_t i = 0; i < c.slopes.size(); ++i) {
      try {
        gens.push_back(PiecewiseAffineMap::circle_affine(c.slopes[i], offsets[i]));
      } catch (const InvalidInput& e) {
        throw ConfigError("system.slopes", e.what());
      }
    }
    return SemigroupSystem(name, Domain::circle(), std::move(gens), std::nullopt, budget);
  }

  // custom_piecewise
  if (c.pieces.empty()) throw ConfigError("system.pieces", "required for custom_piecewise");
  Domain domain = Domain::circle();
  if (c.system_domain == "interval") {
    domain = Domain::interval();
  } else if (c.system_domain != "circle") {
    throw ConfigError("system.domain", "must be circle or interval");
  }
  try {
    for (const auto& p : c.pieces) gens.emplace_back(p, domain.is_circle() && c.system_wrap);
    return SemigroupSystem(name, domain, std::move(gens), std::nullopt, budget);
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError("system.pieces", e.what());
  }
}

Potentials build_potentials(const ExperimentConfig& c, const SemigroupSystem& sys) {
  if (c.potentials_kind == "zero") return zero_potentials(sys.k());
  if (c.potentials_kind == "log_factor") return sys.log_factors();
  if (c.potentials_kind == "scaled_log_factor") return scaled(sys.log_factors(), -c.potentials_t);
  if (c.constants.size() != static_cast<std::size_t>(sys.k())) {
    throw ConfigError("potentials.constants", "expected " + std::to_string(sys.k()) + " constants (one per generator), got " +
                                                  std::to_string(c.constants.size()));
  }
  return constant_potentials(c.constants);
}

SetSample build_sample(const ExperimentConfig& c, const SemigroupSystem& sys) {
  const Domain& d = sys.domain();
  if (c.sample_kind == "grid") {
    if (d.kind() == DomainKind::cantor) throw ConfigError("sample.kind", "grid samples need a circle or interval domain");
    return SetSample::grid(d, c.sample_resolution);
  }
  if (c.sample_kind == "cantor") {
    if (d.kind() != DomainKind::cantor) throw ConfigError("sample.kind", "cantor samples need the Cantor domain");
    if (c.sample_depth > d.cantor_depth()) {
      throw ConfigError("sample.depth", "must not exceed system.cantor_depth");
    }
    return SetSample::cantor(d, c.sample_depth);
  }
  for (double x : c.sample_points) {
    if (!d.contains(x)) throw ConfigError("sample.points", "point " + std::to_string(x) + " lies outside the domain");
  }
  try {
    return SetSample::explicit_points(d, c.sample_points, c.sample_mesh, "explicit");
  } catch (const InvalidInput& e) {
    throw ConfigError("sample.points", e.what());
  }
}

DimensionSettings dimension_settings(const ExperimentConfig& c) {
  DimensionSettings s;
  s.deltas = c.deltas;
  s.depths = c.depths;
  s.resolution_factor = c.resolution_factor;
  s.tail_fraction = c.tail_fraction;
  s.tol = c.solver_tol;
  s.lyapunov_points = static_cast<std::size_t>(c.lyapunov_points);
  s.cover = c.cover;
  s.box_scales = geometric_scales(c.box_base, c.box_first, c.box_last);
  return s;
}

BatterySettings battery_settings(const ExperimentConfig& c) {
  BatterySettings s;
  s.deltas = c.deltas;
  s.depths = c.depths;
  s.resolution_factor = c.resolution_factor;
  s.tail_fraction = c.tail_fraction;
  s.cover = c.cover;
  s.t_grid = c.t_grid;
  s.solver_tol = c.solver_tol;
  s.lyapunov_points = static_cast<std::size_t>(c.lyapunov_points);
  s.seed = c.seed;
  s.perturbation = c.perturbation;
  s.shift = c.shift;
  s.slope_tol = c.slope_tol;
  return s;
}

}  // namespace semipress
