#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semipress/dimension.hpp"
#include "semipress/pressure.hpp"

namespace semipress {

/// hat alpha / hat beta: min / max of the tail Lyapunov estimates over a
/// strided subset of the sample, beta capped by the largest log factor.
struct ExponentBounds {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t points = 0;
};

ExponentBounds sample_exponents(const SemigroupSystem& sys, const SetSample& z, std::span<const int> schedule,
                                std::size_t max_points = 256, double tail_fraction = 0.25);

/// P^(-t Phi) at one scale: the variable-depth estimate over `depths`.
double pressure_at(const SemigroupSystem& factors_sys, const SetSample& z, double delta, std::span<const int> depths,
                   const CoverSettings& settings, double t);

struct PressureCurve {
  std::vector<double> t;
  std::vector<double> values;
  std::vector<double> slopes;  // finite differences between neighbours
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
};

/// Evaluates the pressure at -t Phi, Phi = log factors, for each t at the
/// same (delta, depths, variant, strategy). Refuses non-expanding systems.
PressureCurve pressure_curve(const SemigroupSystem& sys, const SetSample& z, std::span<const double> t_grid,
                             double delta, std::span<const int> depths, const CoverSettings& settings,
                             const ExponentBounds& bounds);

struct BowenRoot {
  double t_star = 0.0;
  double h_raw = 0.0;  // P^(0), may be slightly negative for tiny samples
  double h_hat = 0.0;  // max(h_raw, 0)
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  std::vector<std::pair<double, double>> evaluations;  // (t, P^(-t Phi))
};

/// t* = inf{t >= 0 : P^(-t Phi) <= 0} by bisection, starting from
/// [h/beta, h/alpha] widened by 10% and re-bracketed when the end signs are
/// wrong. Throws SolverFailure (with the evaluations) if no sign change is found.
BowenRoot solve_bowen(const SemigroupSystem& sys, const SetSample& z, double delta, std::span<const int> depths,
                      const CoverSettings& settings, const ExponentBounds& bounds, double tol = 1e-3);

/// h / alpha, used when the exponent is the same across the sample.
double root_from_alpha(double h, double alpha);

struct ScaleRoot {
  double delta = 0.0;
  std::vector<int> depths;       // depths passing the resolution check
  std::vector<int> tail_depths;  // depths fed to the variable-depth estimate
  CapacityEstimate capacity;     // at t = 0
  BowenRoot root;
};

struct DimensionReport {
  std::string system;
  std::string sample;
  double t_star = 0.0;
  double h_hat = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  std::optional<double> closed_form;  // h/alpha when alpha ~ beta
  double tolerance = 0.0;
  std::vector<ScaleRoot> scales;
  BoxCountProfile box;
  double fit_residual = 0.0;  // linear fit of t*(delta) against delta
};

struct DimensionSettings {
  std::vector<double> deltas{0.2, 0.1, 0.05};
  std::vector<int> depths;  // N schedule before the resolution filter
  double resolution_factor = 8.0;
  double tail_fraction = 0.25;
  double tol = 1e-3;
  std::size_t lyapunov_points = 256;
  CoverSettings cover;
  std::vector<double> box_scales;
};

/// Entropy profile and Bowen root at one delta; `depths` is empty when no
/// depth passes the resolution check (nothing else is computed then).
ScaleRoot solve_scale(const SemigroupSystem& sys, const SetSample& z, double delta, const DimensionSettings& settings,
                      const ExponentBounds& bounds);

/// Report over already solved scales (in delta-schedule order).
DimensionReport assemble_report(const SemigroupSystem& sys, const SetSample& z, const DimensionSettings& settings,
                                const ExponentBounds& bounds, std::vector<ScaleRoot> scales);

DimensionReport estimate_dimension(const SemigroupSystem& sys, const SetSample& z, const DimensionSettings& settings);

}  // namespace semipress
