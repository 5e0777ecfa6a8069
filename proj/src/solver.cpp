#include "semipress/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semipress/cocycle.hpp"
#include "semipress/errors.hpp"
#include "semipress/schedule.hpp"

namespace semipress {

ExponentBounds sample_exponents(const SemigroupSystem& sys, const SetSample& z, std::span<const int> schedule,
                                std::size_t max_points, double tail_fraction) {
  if (z.points.empty()) throw InvalidInput("empty sample");
  if (max_points == 0) throw InvalidInput("need at least one Lyapunov point");
  ExponentBounds out;
  out.alpha = std::numeric_limits<double>::infinity();
  out.beta = -out.alpha;
  const std::size_t m = z.points.size();
  const std::size_t count = std::min(m, max_points);
  for (std::size_t j = 0; j < count; ++j) {
    const double x = z.points[j * m / count];
    const auto est = lyapunov_profile(sys, x, schedule, tail_fraction);
    out.alpha = std::min(out.alpha, est.lower);
    out.beta = std::max(out.beta, est.upper);
  }
  out.beta = std::min(out.beta, sys.max_log_factor());
  out.points = count;
  return out;
}

double pressure_at(const SemigroupSystem& sys, const SetSample& z, double delta, std::span<const int> depths,
                   const CoverSettings& settings, double t) {
  CoverProblem problem(sys.with_potentials(scaled(sys.log_factors(), -t)), z, delta, settings);
  return pesin_pressure(problem, depths).value;
}

PressureCurve pressure_curve(const SemigroupSystem& sys, const SetSample& z, std::span<const double> t_grid,
                             double delta, std::span<const int> depths, const CoverSettings& settings,
                             const ExponentBounds& bounds) {
  if (!(bounds.alpha > 0.0)) {
    throw SolverFailure("system is not expanding on the sample (alpha_hat = " + std::to_string(bounds.alpha) + ")");
  }
  if (t_grid.empty() || !strictly_increasing(t_grid)) throw InvalidInput("t grid must be nonempty and increasing");
  PressureCurve curve;
  curve.alpha_hat = bounds.alpha;
  curve.beta_hat = bounds.beta;
  for (double t : t_grid) {
    curve.t.push_back(t);
    curve.values.push_back(pressure_at(sys, z, delta, depths, settings, t));
  }
  for (std::size_t i = 1; i < curve.t.size(); ++i) {
    curve.slopes.push_back((curve.values[i] - curve.values[i - 1]) / (curve.t[i] - curve.t[i - 1]));
  }
  return curve;
}

double root_from_alpha(double h, double alpha) {
  if (!(alpha > 0.0)) throw InvalidInput("root_from_alpha needs alpha > 0");
  return h / alpha;
}

BowenRoot solve_bowen(const SemigroupSystem& sys, const SetSample& z, double delta, std::span<const int> depths,
                      const CoverSettings& settings, const ExponentBounds& bounds, double tol) {
  if (!(bounds.alpha > 0.0)) {
    throw SolverFailure("system is not expanding on the sample (alpha_hat = " + std::to_string(bounds.alpha) + ")");
  }
  if (!(tol > 0.0)) throw InvalidInput("root tolerance must be positive");
  BowenRoot out;
  auto eval = [&](double t) {
    const double p = pressure_at(sys, z, delta, depths, settings, t);
    out.evaluations.emplace_back(t, p);
    return p;
  };
  out.h_raw = eval(0.0);
  out.h_hat = std::max(0.0, out.h_raw);
  out.bracket_lo = out.h_hat / bounds.beta;
  out.bracket_hi = out.h_hat / bounds.alpha;
  if (out.h_raw <= 0.0) {
    out.t_star = 0.0;
    return out;
  }

  double lo = out.bracket_lo / 1.1;
  double hi = out.bracket_hi * 1.1;
  if (eval(lo) <= 0.0) lo = 0.0;  // P^(0) > 0 here
  double p_hi = eval(hi);
  for (int widen = 0; p_hi > 0.0 && widen < 8; ++widen) {
    lo = hi;
    hi *= 2.0;
    p_hi = eval(hi);
  }
  if (p_hi > 0.0) throw SolverFailure("no sign change of the pressure in the expanded bracket", out.evaluations);

  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    const double p = eval(mid);
    ++out.iterations;
    if (p > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.t_star = 0.5 * (lo + hi);
  return out;
}

ScaleRoot solve_scale(const SemigroupSystem& sys, const SetSample& z, double delta, const DimensionSettings& settings,
                      const ExponentBounds& bounds) {
  ScaleRoot s;
  s.delta = delta;
  s.depths = valid_depths(sys, z, delta, settings.depths, settings.resolution_factor);
  if (s.depths.empty()) return s;
  const auto tail = schedule_tail<int>(s.depths, settings.tail_fraction);
  s.tail_depths.assign(tail.begin(), tail.end());
  const auto factors = sys.with_potentials(sys.log_factors());
  CoverProblem entropy(factors.with_potentials(zero_potentials(sys.k())), z, delta, settings.cover);
  s.capacity = capacity_pressure(entropy, s.depths, settings.tail_fraction);
  s.root = solve_bowen(factors, z, delta, s.tail_depths, settings.cover, bounds, settings.tol);
  return s;
}

DimensionReport estimate_dimension(const SemigroupSystem& sys, const SetSample& z, const DimensionSettings& settings) {
  if (settings.deltas.empty()) throw InvalidInput("delta schedule must be nonempty");
  if (settings.depths.empty()) throw InvalidInput("depth schedule must be nonempty");
  const auto bounds = sample_exponents(sys, z, settings.depths, settings.lyapunov_points, settings.tail_fraction);
  std::vector<ScaleRoot> scales;
  for (double delta : settings.deltas) scales.push_back(solve_scale(sys, z, delta, settings, bounds));
  return assemble_report(sys, z, settings, bounds, std::move(scales));
}

DimensionReport assemble_report(const SemigroupSystem& sys, const SetSample& z, const DimensionSettings& settings,
                                const ExponentBounds& bounds, std::vector<ScaleRoot> scales) {
  DimensionReport report;
  report.system = sys.name();
  report.sample = z.descriptor;
  report.tolerance = settings.tol;
  report.alpha_hat = bounds.alpha;
  report.beta_hat = bounds.beta;
  for (auto& s : scales) {
    if (!s.depths.empty()) report.scales.push_back(std::move(s));
  }
  if (report.scales.empty()) {
    throw SolverFailure("no depth passes the resolution check at any delta; refine the sample or enlarge delta");
  }
  const auto& last = report.scales.back();
  report.t_star = last.root.t_star;
  report.h_hat = last.root.h_hat;
  report.bracket_lo = last.root.bracket_lo;
  report.bracket_hi = last.root.bracket_hi;
  if (std::abs(bounds.alpha - bounds.beta) < 1e-9) report.closed_form = root_from_alpha(report.h_hat, bounds.alpha);

  if (report.scales.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(report.scales.size());
    for (const auto& r : report.scales) {
      sx += r.delta;
      sy += r.root.t_star;
      sxx += r.delta * r.delta;
      sxy += r.delta * r.root.t_star;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    double ss = 0.0;
    for (const auto& r : report.scales) ss += std::pow(r.root.t_star - (icpt + slope * r.delta), 2);
    report.fit_residual = std::sqrt(ss / m);
  }

  if (!settings.box_scales.empty()) report.box = box_dimension(z, settings.box_scales);
  return report;
}

}  // namespace semipress
