#include "semipress/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "semipress/errors.hpp"
#include "semipress/schedule.hpp"

namespace semipress {

void InvariantCheck::record(double margin, const std::string& where) {
  ++checks;
  worst_margin = std::min(worst_margin, margin);
  if (margin < 0.0) {
    if (violations == 0) first_violation = where;
    ++violations;
  }
}

bool InvariantReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.pass(); });
}

const InvariantCheck& InvariantReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidInput("no invariant named '" + name + "'");
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Every estimate produced at one scale, in a fixed order.
struct ScaleEstimates {
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<bool> uniform_depth;
  double pesin = 0.0;
  double cp_lower = 0.0;
  double cp_upper = 0.0;
};

ScaleEstimates estimate_all(const SemigroupSystem& sys, const SetSample& z, double delta, std::span<const int> depths,
                            std::span<const int> tail, const CoverSettings& cover, double tail_fraction) {
  CoverProblem p(sys, z, delta, cover);
  ScaleEstimates out;
  const auto cap = capacity_pressure(p, depths, tail_fraction);
  for (const auto& e : cap.profile) {
    out.labels.push_back("alpha*(N=" + std::to_string(e.n) + ")");
    out.values.push_back(e.alpha_star);
    out.uniform_depth.push_back(true);
  }
  out.cp_lower = cap.lower;
  out.cp_upper = cap.upper;
  out.labels.insert(out.labels.end(), {"CP_lower", "CP_upper", "P"});
  out.values.insert(out.values.end(), {cap.lower, cap.upper, pesin_pressure(p, tail).value});
  out.uniform_depth.insert(out.uniform_depth.end(), {true, true, false});
  out.pesin = out.values.back();
  return out;
}

std::string at(double delta, const std::string& label) {
  std::ostringstream os;
  os << "delta=" << delta << " " << label;
  return os.str();
}

SetSample subset(const SetSample& z, const std::vector<std::size_t>& idx, const std::string& name) {
  std::vector<double> pts;
  for (std::size_t i : idx) pts.push_back(z.points[i]);
  return SetSample::explicit_points(z.domain, std::move(pts), z.mesh, name);
}

Potentials perturbed(const Potentials& phi, double amplitude) {
  Potentials out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Potential base = phi[i];
    const double phase = 0.25 * static_cast<double>(i);
    out.push_back(Potential::function(
        [base, amplitude, phase](double x) { return base(x) + amplitude * std::sin(kTwoPi * (x + phase)); },
        base.label() + "+wave"));
  }
  return out;
}

}  // namespace

InvariantReport verify_invariants(const SemigroupSystem& sys, const SetSample& z, const BatterySettings& s) {
  if (s.depths.empty() || s.deltas.empty()) throw InvalidInput("battery schedules must be nonempty");
  InvariantReport report;
  report.system = sys.name();
  InvariantCheck ordering{"ordering"}, monotone{"monotonicity"}, unions{"countable_union"},
      continuity{"continuity"}, shift{"shift_identity"}, shift_mixed{"shift_identity_variable_depth"},
      gap{"variant_gap"}, conjugacy{"conjugacy"}, decrease{"strict_decrease"}, sandwich{"slope_sandwich"},
      bracket{"root_bracket"}, closed{"closed_form_root"};

  // nested and split samples
  std::vector<std::size_t> half, quarter, random_half, first, second;
  std::mt19937_64 rng(s.seed);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i % 2 == 0) half.push_back(i);
    if (i % 4 == 0) quarter.push_back(i);
    (i < z.size() / 2 ? first : second).push_back(i);
  }
  for (std::size_t i : half) {
    if (rng() % 2 == 0) random_half.push_back(i);
  }
  if (random_half.empty()) random_half.push_back(half.front());
  if (second.empty()) second = first;
  if (first.empty()) first = second;
  const auto z_half = subset(z, half, "half");
  const auto z_quarter = subset(z, quarter, "quarter");
  const auto z_random = subset(z, random_half, "random_half");
  const auto z_first = subset(z, first, "first_half");
  const auto z_second = subset(z, second, "second_half");

  const Potentials phi = sys.potentials();
  const auto psi_sys = sys.with_potentials(perturbed(phi, s.perturbation));
  const auto shifted_sys = sys.with_potentials(shifted(phi, s.shift));
  CoverSettings sup = s.cover;
  sup.variant = Variant::sup;
  CoverSettings centre = s.cover;
  centre.variant = Variant::center;

  auto mirror = [](double x) { return 1.0 - x; };
  std::optional<SemigroupSystem> conj;
  try {
    conj = conjugate_system(psi_sys, mirror, mirror);
  } catch (const InvalidInput&) {
    conj.reset();
  }

  for (double delta : s.deltas) {
    const auto depths = valid_depths(sys, z, delta, s.depths, s.resolution_factor);
    if (depths.empty()) continue;
    const auto tail = schedule_tail<int>(depths, s.tail_fraction);
    auto est = [&](const SemigroupSystem& sy, const SetSample& zz, const CoverSettings& cs) {
      return estimate_all(sy, zz, delta, depths, tail, cs, s.tail_fraction);
    };
    const auto base = est(sys, z, s.cover);

    ordering.record(base.cp_lower - base.pesin + 1e-9, at(delta, "P <= CP_lower"));
    ordering.record(base.cp_upper - base.cp_lower + 1e-9, at(delta, "CP_lower <= CP_upper"));

    const auto e_half = est(sys, z_half, s.cover);
    const auto e_quarter = est(sys, z_quarter, s.cover);
    const auto e_random = est(sys, z_random, s.cover);
    for (std::size_t i = 0; i < base.values.size(); ++i) {
      monotone.record(e_half.values[i] - e_quarter.values[i] + 1e-9, at(delta, "quarter<=half " + base.labels[i]));
      monotone.record(e_half.values[i] - e_random.values[i] + 1e-9, at(delta, "random<=half " + base.labels[i]));
      monotone.record(base.values[i] - e_half.values[i] + 1e-9, at(delta, "half<=Z " + base.labels[i]));
    }

    const auto e_first = est(sys, z_first, s.cover);
    const auto e_second = est(sys, z_second, s.cover);
    for (std::size_t i = 0; i < base.values.size(); ++i) {
      unions.record(base.values[i] - std::max(e_first.values[i], e_second.values[i]) + 1e-9,
                    at(delta, base.labels[i]));
    }

    const auto e_psi = est(psi_sys, z, s.cover);
    for (std::size_t i = 0; i < base.values.size(); ++i) {
      continuity.record(s.perturbation + 1e-9 - std::abs(e_psi.values[i] - base.values[i]), at(delta, base.labels[i]));
    }

    const auto e_shift = est(shifted_sys, z, s.cover);
    for (std::size_t i = 0; i < base.values.size(); ++i) {
      const double err = std::abs(e_shift.values[i] - base.values[i] - s.shift);
      if (base.uniform_depth[i]) {
        shift.record(1e-12 - err, at(delta, base.labels[i]));
      } else {
        shift_mixed.record(1e-9 - err, at(delta, base.labels[i]));
      }
    }

    for (const SemigroupSystem* sy : {&sys, &psi_sys}) {
      CoverProblem ps(*sy, z, delta, sup);
      const auto c = est(*sy, z, centre);
      const auto u = est(*sy, z, sup);
      for (std::size_t i = 0; i < c.values.size(); ++i) {
        gap.record(ps.epsilon() + 1e-12 - std::abs(u.values[i] - c.values[i]), at(delta, sy->potentials()[0].label() + " " + c.labels[i]));
      }
    }

    if (conj) {
      const auto gz = z.mapped(mirror, "mirror(" + z.descriptor + ")");
      CoverProblem src(psi_sys, z, delta, s.cover);
      CoverProblem dst(*conj, gz, delta, s.cover);
      auto compare = [&](const Cover& c, const std::string& label) {
        const Cover m = map_cover(c, mirror, dst);
        if (!covers(*conj, m, gz)) {
          conjugacy.record(-1.0, at(delta, label + " mirrored cover misses g(Z)"));
          return;
        }
        const double a = critical_value(c, src.theta());
        const double b = critical_value(m, dst.theta());
        conjugacy.record(1e-9 - std::abs(a - b), at(delta, label));
      };
      for (int n : depths) compare(src.uniform_cover(n), "alpha*(N=" + std::to_string(n) + ")");
      compare(pesin_pressure(src, tail).cover, "P");
    }

    // Bowen root at this scale
    const auto bounds = sample_exponents(sys, z, s.depths, s.lyapunov_points, s.tail_fraction);
    const auto factors = sys.with_potentials(sys.log_factors());
    const auto root = solve_bowen(factors, z, delta, tail, s.cover, bounds, s.solver_tol);
    bracket.record(root.t_star - (root.h_hat / bounds.beta - s.solver_tol), at(delta, "t* >= h/beta - tol"));
    bracket.record(root.h_hat / bounds.alpha + s.solver_tol - root.t_star, at(delta, "t* <= h/alpha + tol"));
    if (std::abs(bounds.alpha - bounds.beta) < 1e-9) {
      closed.record(2.0 * s.solver_tol - std::abs(root.t_star - root_from_alpha(root.h_hat, bounds.alpha)),
                    at(delta, "t* vs h/alpha"));
    }

    if (delta == s.deltas.back()) {
      const auto curve = pressure_curve(factors, z, s.t_grid, delta, tail, s.cover, bounds);
      for (std::size_t i = 0; i < curve.slopes.size(); ++i) {
        const std::string where = at(delta, "t=" + std::to_string(curve.t[i]));
        if (curve.t[i + 1] > curve.t[i] + 1e-6) decrease.record(curve.values[i] - curve.values[i + 1] - 1e-12, where);
        sandwich.record(curve.slopes[i] + bounds.beta + s.slope_tol, where + " slope >= -beta - tol");
        sandwich.record(-bounds.alpha + s.slope_tol - curve.slopes[i], where + " slope <= -alpha + tol");
      }
    }
  }

  for (auto* c : {&ordering, &monotone, &unions, &continuity, &shift, &shift_mixed, &gap, &conjugacy, &decrease,
                  &sandwich, &bracket, &closed}) {
    if (c->checks > 0) report.checks.push_back(*c);
  }
  return report;
}

}  // namespace semipress
