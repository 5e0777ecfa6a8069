#include "semipress/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "semipress/errors.hpp"
#include "semipress/schedule.hpp"

namespace semipress {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double mean_constant(const Potentials& phi) {
  double s = 0.0;
  for (const auto& p : phi) s += *p.constant_value();
  return s / static_cast<double>(phi.size());
}

}  // namespace

double birkhoff_word_sum(const SemigroupSystem& sys, const Word& w, double x) {
  if (w.alphabet() != sys.k()) throw InvalidInput("word alphabet does not match system");
  const auto& phi = sys.potentials();
  double sum = 0.0;
  for (auto s : w.symbols()) {
    sum += phi[s](x);
    x = sys.apply(s, x);
  }
  return sum;
}

AveragedCocycle averaged_sum(const SemigroupSystem& sys, double x, int n) {
  if (n < 0) throw InvalidInput("negative depth");
  level_size(sys.k(), n, sys.word_budget());
  AveragedCocycle out;
  out.x = x;
  out.n = n;
  out.method = SumMethod::exact_tree;
  out.level_terms.reserve(static_cast<std::size_t>(n));
  const auto& phi = sys.potentials();
  if (all_constant(phi)) {
    const double c = mean_constant(phi);
    out.level_terms.assign(static_cast<std::size_t>(n), c);
    out.value = c * n;
    return out;
  }
  if (n == 0) return out;
  const auto tree = build_orbit_tree(sys, x, n - 1);
  const int k = sys.k();
  double inv = 1.0;
  for (int m = 1; m <= n; ++m) {
    inv /= k;
    double level = 0.0;
    for (double p : tree.level(m - 1)) {
      for (int i = 0; i < k; ++i) level += phi[static_cast<std::size_t>(i)](p);
    }
    out.level_terms.push_back(level * inv);
  }
  for (double t : out.level_terms) out.value += t;
  return out;
}

Word sampled_word(int k, int n, std::uint64_t seed, std::uint64_t s) {
  std::mt19937_64 rng(mix64(mix64(seed) ^ s));
  std::vector<std::uint8_t> symbols(static_cast<std::size_t>(n));
  for (auto& sym : symbols) sym = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(k));
  return Word(k, std::move(symbols));
}

AveragedCocycle averaged_sum(const SemigroupSystem& sys, double x, int n, const MonteCarloSpec& mc) {
  if (n < 0) throw InvalidInput("negative depth");
  if (mc.samples < 1) throw InvalidInput("monte carlo needs at least one sample");
  AveragedCocycle out;
  out.x = x;
  out.n = n;
  out.method = SumMethod::monte_carlo;
  out.seed = mc.seed;
  out.samples = mc.samples;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 0; s < mc.samples; ++s) {
    const double v = birkhoff_word_sum(sys, sampled_word(sys.k(), n, mc.seed, s), x);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  out.value = mean;
  if (mc.samples > 1) {
    const double var = m2 / static_cast<double>(mc.samples - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(mc.samples));
  }
  return out;
}

LyapunovEstimate lyapunov_profile(const SemigroupSystem& sys, double x, std::span<const int> schedule,
                                  double tail_fraction) {
  if (schedule.empty() || !strictly_increasing(schedule) || schedule.front() < 1) {
    throw InvalidInput("lyapunov schedule must be nonempty, positive and increasing");
  }
  const auto factors = sys.with_potentials(sys.log_factors());
  const auto full = averaged_sum(factors, x, schedule.back());
  LyapunovEstimate out;
  out.x = x;
  out.depths.assign(schedule.begin(), schedule.end());
  double prefix = 0.0;
  int m = 0;
  for (int n : schedule) {
    while (m < n) prefix += full.level_terms[static_cast<std::size_t>(m++)];
    out.averaged.push_back(prefix);
    out.lambda.push_back(prefix / n);
  }
  auto tail = schedule_tail(std::span<const double>(out.lambda), tail_fraction);
  out.lower = *std::min_element(tail.begin(), tail.end());
  out.upper = *std::max_element(tail.begin(), tail.end());
  return out;
}

TemperedDiagnostic tempered_diagnostic(const SemigroupSystem& sys, double x, double epsilon, int n_max) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (n_max < 1) throw InvalidInput("n_max must be at least 1");
  const int k = sys.k();
  const auto& phi = sys.potentials();
  const auto tree = build_orbit_tree(sys, x, n_max);

  // path_sum at level m, index j = S_u Phi(x) for the word u with that index.
  std::vector<double> path{0.0};
  std::vector<double> next;
  double averaged = 0.0;
  double best_single = -std::numeric_limits<double>::infinity();
  int best_single_m = 0;
  std::uint64_t best_single_idx = 0;

  TemperedDiagnostic out;
  out.x = x;
  out.epsilon = epsilon;
  out.n_max = n_max;
  out.value = std::numeric_limits<double>::infinity();

  for (int m = 1; m <= n_max; ++m) {
    const auto parents = tree.level(m - 1);
    next.assign(parents.size() * static_cast<std::size_t>(k), 0.0);
    double level_total = 0.0;
    for (std::size_t j = 0; j < parents.size(); ++j) {
      for (int i = 0; i < k; ++i) {
        const double v = phi[static_cast<std::size_t>(i)](parents[j]);
        next[j * static_cast<std::size_t>(k) + static_cast<std::size_t>(i)] = path[j] + v;
        level_total += v;
      }
    }
    path.swap(next);
    averaged += level_total / static_cast<double>(path.size());
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (path[j] > best_single) {
        best_single = path[j];
        best_single_m = m;
        best_single_idx = j;
      }
    }
    const double value = averaged - best_single + m * epsilon;
    if (value < out.value) {
      out.value = value;
      out.witness_n = m;
      out.witness = enumerate_level(k, best_single_m, sys.word_budget()).at(best_single_idx);
    }
  }
  return out;
}

}  // namespace semipress
