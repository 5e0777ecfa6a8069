#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semipress/system.hpp"
#include "semipress/word.hpp"

namespace semipress {

/// S_w Phi(x) = phi_{i_1}(x) + phi_{i_2}(f_{i_1} x) + ... for w = i_1 ... i_n,
/// using the system's potentials.
double birkhoff_word_sum(const SemigroupSystem& sys, const Word& w, double x);

enum class SumMethod { exact_tree, monte_carlo };

struct MonteCarloSpec {
  std::uint64_t seed = 0;
  std::uint64_t samples = 1;
};

/// A_n(x) = k^{-n} sum_{|w|=n} S_w Phi(x), with the level-by-level split
/// level_terms[m-1] = k^{-m} sum_{|u|=m} phi_{i_m}(f_{i_{m-1}..i_1} x).
struct AveragedCocycle {
  double x = 0.0;
  int n = 0;
  double value = 0.0;
  std::vector<double> level_terms;
  SumMethod method = SumMethod::exact_tree;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double standard_error = 0.0;
};

/// One orbit-tree pass (sum_{m<=n} k^m potential evaluations). Constant
/// potentials are summed in closed form.
AveragedCocycle averaged_sum(const SemigroupSystem& sys, double x, int n);

/// Averages S_w Phi(x) over uniformly drawn words. Word s is drawn from a
/// generator keyed by (seed, s), so results do not depend on evaluation order.
AveragedCocycle averaged_sum(const SemigroupSystem& sys, double x, int n, const MonteCarloSpec& mc);

/// Symbols of the s-th Monte Carlo word.
Word sampled_word(int k, int n, std::uint64_t seed, std::uint64_t s);

struct LyapunovEstimate {
  double x = 0.0;
  std::vector<int> depths;
  std::vector<double> averaged;  // A_n with Phi = log factors
  std::vector<double> lambda;    // A_n / n
  double lower = 0.0;            // min over the schedule tail
  double upper = 0.0;            // max over the schedule tail

  /// Finite-scale surrogate for "x in A(E)" with E = [lo, hi]. Heuristic.
  bool tail_within(double lo, double hi) const { return lo <= lower && upper <= hi; }
};

LyapunovEstimate lyapunov_profile(const SemigroupSystem& sys, double x, std::span<const int> schedule,
                                  double tail_fraction = 0.25);

/// min over 1 <= m <= n <= n_max and |w'| = m of
///   A_n(x) - S_{w'} Phi(x) + n*eps.
/// A finite-depth number, never a verdict on membership in the tempered set.
struct TemperedDiagnostic {
  double x = 0.0;
  double epsilon = 0.0;
  int n_max = 0;
  double value = 0.0;
  int witness_n = 0;
  Word witness;
  bool heuristic = true;
};

TemperedDiagnostic tempered_diagnostic(const SemigroupSystem& sys, double x, double epsilon, int n_max);

}  // namespace semipress
