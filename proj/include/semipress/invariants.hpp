#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "semipress/solver.hpp"

namespace semipress {

/// One property checked over many comparisons. `worst_margin` is the smallest
/// (allowed - observed) slack seen; it is negative exactly when a check failed.
struct InvariantCheck {
  explicit InvariantCheck(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string first_violation;

  bool pass() const { return violations == 0; }
  void record(double margin, const std::string& where);
};

struct InvariantReport {
  std::string system;
  std::vector<InvariantCheck> checks;

  bool all_pass() const;
  const InvariantCheck& find(const std::string& name) const;
};

struct BatterySettings {
  std::vector<double> deltas{0.2, 0.1, 0.05};
  std::vector<int> depths;
  double resolution_factor = 8.0;
  double tail_fraction = 0.25;
  CoverSettings cover;
  std::vector<double> t_grid{0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
  double solver_tol = 1e-3;
  std::size_t lyapunov_points = 256;
  std::uint64_t seed = 1;
  double perturbation = 0.05;  // sup norm of the continuity perturbation
  double shift = 0.37;
  double slope_tol = 0.02;
};

/// Orderings, monotonicity in Z, countable unions, continuity in Phi, the
/// shift identity, the centre/sup gap, conjugacy under x -> 1 - x, strict
/// decrease and slope bounds of the pressure curve, and root bracketing.
InvariantReport verify_invariants(const SemigroupSystem& sys, const SetSample& z, const BatterySettings& settings);

}  // namespace semipress
