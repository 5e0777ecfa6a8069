#include "semipress/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "semipress/cocycle.hpp"
#include "semipress/schedule.hpp"

#ifndef SEMIPRESS_VERSION
#define SEMIPRESS_VERSION "0.0.0"
#endif
#ifndef SEMIPRESS_YAML_CPP_VERSION
#define SEMIPRESS_YAML_CPP_VERSION "unknown"
#endif

namespace semipress {

using nlohmann::json;

namespace {

constexpr const char* kOutDirEnv = "SEMIPRESS_OUT_DIR";

// Runs fn(i) for i < count on up to `workers` threads. Every slot is filled
// independently, so the results do not depend on scheduling; the first
// failure in index order is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json config_json(const ExperimentConfig& c) {
  json pieces = json::array();
  for (const auto& gen : c.pieces) {
    json g = json::array();
    for (const auto& p : gen) g.push_back({p.lo, p.hi, p.slope, p.offset});
    pieces.push_back(g);
  }
  return json{
      {"system.kind", c.system_kind},
      {"system.name", c.system_name},
      {"system.slopes", c.slopes},
      {"system.offsets", c.offsets},
      {"system.domain", c.system_domain},
      {"system.wrap", c.system_wrap},
      {"system.pieces", pieces},
      {"system.cantor_depth", c.cantor_depth},
      {"potentials.kind", c.potentials_kind},
      {"potentials.constants", c.constants},
      {"potentials.t", c.potentials_t},
      {"sample.kind", c.sample_kind},
      {"sample.resolution", c.sample_resolution},
      {"sample.depth", c.sample_depth},
      {"sample.points", c.sample_points},
      {"sample.mesh", c.sample_mesh},
      {"schedule.depths", c.depths},
      {"schedule.deltas", c.deltas},
      {"schedule.t_grid", c.t_grid},
      {"schedule.tail_fraction", c.tail_fraction},
      {"cover.variant", to_string(c.cover.variant)},
      {"cover.strategy", to_string(c.cover.strategy)},
      {"cover.reference_resolution", c.cover.reference_resolution},
      {"cover.sup_probes", c.cover.sup_probes},
      {"cover.modulus_probes", c.cover.modulus_probes},
      {"dimension.enabled", c.dimension},
      {"dimension.tol", c.solver_tol},
      {"dimension.lyapunov_points", c.lyapunov_points},
      {"dimension.resolution_factor", c.resolution_factor},
      {"box.base", c.box_base},
      {"box.first", c.box_first},
      {"box.last", c.box_last},
      {"battery.perturbation", c.perturbation},
      {"battery.shift", c.shift},
      {"battery.slope_tol", c.slope_tol},
      {"seed", c.seed},
      {"budget.words", c.word_budget},
      {"run.workers", c.workers},
      {"output.dir", c.out_dir},
  };
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct PressureRows {
  std::vector<int> depths;
  CapacityEstimate capacity;
  PesinEstimate pesin;
};

std::string results_csv(const std::string& system, const CoverSettings& cover,
                        const std::vector<std::pair<double, PressureRows>>& scales) {
  std::string out = "system,variant,strategy,estimate,N,delta,mesh,alpha_star,atom_count,total_weight,refinements_accepted\n";
  const std::string prefix = system + "," + to_string(cover.variant) + "," + to_string(cover.strategy) + ",";
  auto row = [&](const char* estimate, int n, double delta, double mesh, double alpha, std::size_t atoms, double weight,
                 std::size_t refinements) {
    out += prefix + estimate + "," + std::to_string(n) + "," + num(delta) + "," + num(mesh) + "," + num(alpha) + "," +
           std::to_string(atoms) + "," + num(weight) + "," + std::to_string(refinements) + "\n";
  };
  for (const auto& [delta, s] : scales) {
    if (s.depths.empty()) continue;
    const auto& cap = s.capacity;
    for (const auto& d : cap.profile) row("capacity", d.n, delta, cap.mesh, d.alpha_star, d.atom_count, d.total_weight, 0);
    // the tail extremes, attributed to the depth attaining them
    const auto tail = std::span(cap.profile).subspan(cap.tail_begin);
    const auto lo = std::min_element(tail.begin(), tail.end(),
                                     [](const auto& a, const auto& b) { return a.alpha_star < b.alpha_star; });
    const auto hi = std::max_element(tail.begin(), tail.end(),
                                     [](const auto& a, const auto& b) { return a.alpha_star < b.alpha_star; });
    row("cp_lower", lo->n, delta, cap.mesh, cap.lower, lo->atom_count, lo->total_weight, 0);
    row("cp_upper", hi->n, delta, cap.mesh, cap.upper, hi->atom_count, hi->total_weight, 0);
    const auto& p = s.pesin;
    row("pesin", p.n, delta, p.mesh, p.value, p.atom_count, p.total_weight, p.refinements_accepted);
  }
  return out;
}

json scale_json(const ScaleRoot& s) {
  json evals = json::array();
  for (const auto& [t, p] : s.root.evaluations) evals.push_back({t, p});
  return json{{"delta", s.delta},
              {"depths", s.depths},
              {"tail_depths", s.tail_depths},
              {"theta", s.capacity.theta},
              {"capacity_lower", s.capacity.lower},
              {"capacity_upper", s.capacity.upper},
              {"h_raw", s.root.h_raw},
              {"h_hat", s.root.h_hat},
              {"t_star", s.root.t_star},
              {"bracket_lo", s.root.bracket_lo},
              {"bracket_hi", s.root.bracket_hi},
              {"iterations", s.root.iterations},
              {"evaluations", evals}};
}

std::filesystem::path resolve_out_dir(const std::optional<std::string>& flag, const std::string& from_config) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return from_config;
}

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOverrides& o) {
  if (o.workers) {
    if (*o.workers < 1) throw ConfigError("run.workers", "--workers must be positive");
    cfg.workers = *o.workers;
  }
  if (o.budget_words) {
    if (*o.budget_words == 0) throw ConfigError("budget.words", "--budget-words must be positive");
    cfg.word_budget = *o.budget_words;
  }
  cfg.out_dir = resolve_out_dir(o.out_dir, cfg.out_dir).string();
  return cfg;
}

template <class Body>
int guarded(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& log, Body body) {
  std::filesystem::path out_dir = resolve_out_dir(overrides.out_dir, "out");
  auto fail = [&](int code, const char* kind, const std::string& message, json extra) {
    json err{{"error", kind}, {"exit_code", code}, {"message", message}, {"config", config_path.string()}};
    err.update(extra);
    log << "error (" << kind << "): " << message << "\n";
    try {
      std::filesystem::create_directories(out_dir);
      write_text(out_dir / "error.json", err.dump(2) + "\n");
    } catch (const std::exception& e) {
      log << "could not write error record: " << e.what() << "\n";
    }
    return code;
  };
  try {
    auto cfg = load_config(config_path);
    out_dir = resolve_out_dir(overrides.out_dir, cfg.out_dir);
    cfg = apply_overrides(std::move(cfg), overrides);
    // a stale error record from an earlier run would contradict this one
    std::filesystem::remove(out_dir / "error.json");
    return body(cfg);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what(), {{"field", e.field()}});
  } catch (const BudgetExceeded& e) {
    return fail(kExitBudget, "budget", e.what(), json::object());
  } catch (const SolverFailure& e) {
    json curve = json::array();
    for (const auto& [t, p] : e.curve) curve.push_back({t, p});
    return fail(kExitSolver, "solver", e.what(), {{"evaluations", curve}});
  } catch (const std::exception& e) {
    return fail(kExitFailure, "internal", e.what(), json::object());
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& config_file) {
  const auto sys = build_system(cfg);
  const auto z = build_sample(cfg, sys);
  const auto phi = build_potentials(cfg, sys);
  const auto target = sys.with_potentials(phi);
  const auto dim = dimension_settings(cfg);
  const std::filesystem::path out_dir = cfg.out_dir;
  std::filesystem::create_directories(out_dir);

  const std::size_t nd = cfg.deltas.size();
  std::vector<std::pair<double, PressureRows>> pressure(nd);
  std::vector<ScaleRoot> roots(nd);
  ExponentBounds bounds;
  if (cfg.dimension) bounds = sample_exponents(sys, z, cfg.depths, dim.lyapunov_points, dim.tail_fraction);

  // curve at the finest delta that has valid depths
  std::optional<double> curve_delta;
  std::vector<int> curve_depths;
  for (double d : cfg.deltas) {
    auto v = valid_depths(sys, z, d, cfg.depths, cfg.resolution_factor);
    if (!v.empty()) {
      curve_delta = d;
      const auto tail = schedule_tail<int>(v, cfg.tail_fraction);
      curve_depths.assign(tail.begin(), tail.end());
    }
  }
  const std::size_t nt = cfg.dimension && curve_delta ? cfg.t_grid.size() : 0;
  std::vector<double> curve_values(nt);

  // Tasks: per-delta pressure rows, per-delta Bowen roots, per-t curve points.
  const std::size_t root_tasks = cfg.dimension ? nd : 0;
  parallel_for(nd + root_tasks + nt, cfg.workers, [&](std::size_t i) {
    if (i < nd) {
      const double delta = cfg.deltas[i];
      PressureRows rows;
      rows.depths = valid_depths(sys, z, delta, cfg.depths, cfg.resolution_factor);
      if (!rows.depths.empty()) {
        CoverProblem problem(target, z, delta, cfg.cover);
        rows.capacity = capacity_pressure(problem, rows.depths, cfg.tail_fraction);
        const auto tail = schedule_tail<int>(rows.depths, cfg.tail_fraction);
        rows.pesin = pesin_pressure(problem, tail);
      }
      pressure[i] = {delta, std::move(rows)};
    } else if (i < nd + root_tasks) {
      const std::size_t j = i - nd;
      roots[j] = solve_scale(sys, z, cfg.deltas[j], dim, bounds);
    } else {
      const std::size_t j = i - nd - root_tasks;
      const auto factors = sys.with_potentials(sys.log_factors());
      curve_values[j] = pressure_at(factors, z, *curve_delta, curve_depths, cfg.cover, cfg.t_grid[j]);
    }
  });

  if (std::none_of(pressure.begin(), pressure.end(), [](const auto& p) { return !p.second.depths.empty(); })) {
    throw SolverFailure("no depth passes the resolution check at any delta; refine the sample or enlarge delta");
  }
  write_text(out_dir / "results.csv", results_csv(sys.name(), cfg.cover, pressure));

  // Lyapunov profiles on a strided subset of the sample
  std::string lyap = "system,point,x,n,averaged,lambda\n";
  {
    const std::size_t m = z.size();
    const std::size_t count = std::min(m, static_cast<std::size_t>(cfg.lyapunov_points));
    for (std::size_t j = 0; j < count; ++j) {
      const double x = z.points[j * m / count];
      const auto est = lyapunov_profile(sys, x, cfg.depths, cfg.tail_fraction);
      for (std::size_t q = 0; q < est.depths.size(); ++q) {
        lyap += sys.name() + "," + std::to_string(j) + "," + num(x) + "," + std::to_string(est.depths[q]) + "," +
                num(est.averaged[q]) + "," + num(est.lambda[q]) + "\n";
      }
    }
  }
  write_text(out_dir / "lyapunov.csv", lyap);

  const auto box = box_dimension(z, dim.box_scales);
  std::string boxes = "system,scale,count,in_window\n";
  for (std::size_t i = 0; i < box.scales.size(); ++i) {
    boxes += sys.name() + "," + num(box.scales[i]) + "," + std::to_string(box.counts[i]) + "," +
             (box.in_window[i] ? "1" : "0") + "\n";
  }
  write_text(out_dir / "boxcount.csv", boxes);

  json report{{"system", sys.name()}, {"sample", z.descriptor}, {"sample_size", z.size()}, {"mesh", z.mesh},
              {"enabled", cfg.dimension}};
  report["box"] = {{"slope", box.slope}, {"intercept", box.intercept}, {"residual", box.residual},
                   {"fit_points", box.fit_points}};
  if (cfg.dimension) {
    const auto rep = assemble_report(sys, z, dim, bounds, roots);
    report["t_star"] = rep.t_star;
    report["h_hat"] = rep.h_hat;
    report["bracket"] = {rep.bracket_lo, rep.bracket_hi};
    report["alpha_hat"] = rep.alpha_hat;
    report["beta_hat"] = rep.beta_hat;
    report["closed_form"] = rep.closed_form ? json(*rep.closed_form) : json(nullptr);
    report["tolerance"] = rep.tolerance;
    report["fit_residual"] = rep.fit_residual;
    report["dimension_box_gap"] = std::abs(rep.t_star - box.slope);
    json scales = json::array();
    for (const auto& s : rep.scales) scales.push_back(scale_json(s));
    report["scales"] = scales;
    std::vector<double> slopes;
    for (std::size_t i = 1; i < nt; ++i) {
      slopes.push_back((curve_values[i] - curve_values[i - 1]) / (cfg.t_grid[i] - cfg.t_grid[i - 1]));
    }
    report["curve"] = {{"delta", curve_delta ? json(*curve_delta) : json(nullptr)},
                       {"depths", curve_depths},
                       {"t", cfg.t_grid},
                       {"values", curve_values},
                       {"slopes", slopes}};
  }
  write_text(out_dir / "dimension_report.json", report.dump(2) + "\n");

  json manifest{{"tool", "semipress"},
                {"version", SEMIPRESS_VERSION},
                {"schema_version", 1},
                {"config_file", config_file},
                {"config", config_json(cfg)},
                {"libraries",
                 {{"yaml-cpp", SEMIPRESS_YAML_CPP_VERSION},
                  {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                        std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                        std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
                {"compiler", __VERSION__},
                {"outputs", {"results.csv", "dimension_report.json", "lyapunov.csv", "boxcount.csv"}}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

InvariantReport verify_experiment(const ExperimentConfig& cfg) {
  if (cfg.system_kind != "builtin" && cfg.system_kind != "cantor_k1") {
    throw ConfigError("system.kind", "verify needs a built-in system (builtin or cantor_k1)");
  }
  const auto sys = build_system(cfg);
  const auto z = build_sample(cfg, sys);
  const auto report = verify_invariants(sys.with_potentials(build_potentials(cfg, sys)), z, battery_settings(cfg));

  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass()},
                      {"checks", c.checks},
                      {"violations", c.violations},
                      {"worst_margin", c.worst_margin},
                      {"first_violation", c.first_violation}});
  }
  const std::filesystem::path out_dir = cfg.out_dir;
  std::filesystem::create_directories(out_dir);
  write_text(out_dir / "invariants.json",
             json{{"system", report.system}, {"all_pass", report.all_pass()}, {"checks", checks}}.dump(2) + "\n");
  return report;
}

int run_command(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& log) {
  return guarded(config, overrides, log, [&](const ExperimentConfig& cfg) {
    run_experiment(cfg, config.string());
    log << "wrote results to " << cfg.out_dir << "\n";
    return static_cast<int>(kExitOk);
  });
}

int verify_command(const std::filesystem::path& config, const RunOverrides& overrides, std::ostream& log) {
  return guarded(config, overrides, log, [&](const ExperimentConfig& cfg) {
    const auto report = verify_experiment(cfg);
    for (const auto& c : report.checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%-32s %s  checks=%zu violations=%zu worst_margin=%.3g", c.name.c_str(),
                    c.pass() ? "PASS" : "FAIL", c.checks, c.violations, c.worst_margin);
      log << line << (c.pass() ? "" : "  first: " + c.first_violation) << "\n";
    }
    return static_cast<int>(report.all_pass() ? kExitOk : kExitFailure);
  });
}

}  // namespace semipress
