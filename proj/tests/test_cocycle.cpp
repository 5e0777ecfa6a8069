#include <cmath>
#include <random>

#include "doctest.h"
#include "semipress/cocycle.hpp"
#include "semipress/errors.hpp"

using namespace semipress;

namespace {

// S_w Phi(x) walked symbol by symbol: phi_{i_1}(x) + phi_{i_2}(f_{i_1} x) + ...
double naive_word_sum(const SemigroupSystem& sys, const Word& w, double x) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.length(); ++j) {
    s += sys.potentials()[w[j]](x);
    x = sys.apply(w[j], x);
  }
  return s;
}

double naive_average(const SemigroupSystem& sys, double x, int n) {
  double s = 0.0;
  double count = 0.0;
  for (const Word& w : enumerate_level(sys.k(), n)) {
    s += naive_word_sum(sys, w, x);
    count += 1.0;
  }
  return s / count;
}

SemigroupSystem wavy_triple() {
  return SemigroupSystem(
      "wavy", Domain::circle(),
      {PiecewiseAffineMap::circle_affine(2, 0.1), PiecewiseAffineMap::circle_affine(3, 0.0),
       PiecewiseAffineMap::circle_affine(-2, 0.3)},
      Potentials{Potential::function([](double x) { return std::sin(6.283185307179586 * x); }, "sin"),
                 Potential::function([](double x) { return x * x; }, "sq"), Potential::constant(-0.4)});
}

}  // namespace

TEST_CASE("word sums") {
  const auto d = catalog::doubling_pair();
  for (int n = 0; n <= 6; ++n) {
    for (const Word& w : enumerate_level(2, n)) {
      CHECK(birkhoff_word_sum(d, w, 0.37) == doctest::Approx(n * std::log(2.0)).epsilon(1e-14));
    }
  }
  CHECK(birkhoff_word_sum(d, Word(2), 0.2) == 0.0);
  const auto h = catalog::heterogeneous_pair();
  CHECK(birkhoff_word_sum(h, Word::parse("01", 2), 0.3) == doctest::Approx(std::log(2.0) + std::log(3.0)));

  const auto w = wavy_triple();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint8_t> s(rng() % 8);
    for (auto& c : s) c = static_cast<std::uint8_t>(rng() % 3);
    const Word word(3, s);
    CHECK(birkhoff_word_sum(w, word, 0.41) == doctest::Approx(naive_word_sum(w, word, 0.41)).epsilon(1e-13));
  }
}

TEST_CASE("averaged sums against all-word enumeration") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& sys : {catalog::doubling_pair(), catalog::heterogeneous_pair(), wavy_triple()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double x = u(rng);
      for (int n = 0; n <= 6; ++n) {
        const auto a = averaged_sum(sys, x, n);
        CHECK(std::abs(a.value - naive_average(sys, x, n)) <= 1e-10);
        double levels = 0.0;
        for (double t : a.level_terms) levels += t;
        CHECK(a.level_terms.size() == static_cast<std::size_t>(n));
        CHECK(std::abs(levels - a.value) <= 1e-12 * std::max(1.0, std::abs(a.value)));
      }
    }
  }
  const auto d = catalog::doubling_pair();
  CHECK(averaged_sum(d, 0.123, 10).value == doctest::Approx(10 * std::log(2.0)).epsilon(1e-14));
  CHECK(averaged_sum(d, 0.123, 0).value == 0.0);
}

TEST_CASE("monte carlo averages") {
  const auto h = catalog::heterogeneous_pair().with_potentials(catalog::heterogeneous_pair().log_factors());
  const auto exact = averaged_sum(h, 0.3, 12);
  const auto mc = averaged_sum(h, 0.3, 12, MonteCarloSpec{42, 2000});
  CHECK(mc.method == SumMethod::monte_carlo);
  CHECK(std::abs(mc.value - exact.value) <= 5.0 * mc.standard_error + 1e-12);

  const auto d = catalog::doubling_pair();
  const auto mcd = averaged_sum(d, 0.3, 12, MonteCarloSpec{1, 50});
  CHECK(mcd.value == doctest::Approx(12 * std::log(2.0)));
  CHECK(mcd.standard_error == doctest::Approx(0.0).epsilon(1e-12));

  // same seed, same words, regardless of call order
  CHECK(sampled_word(3, 9, 5, 17) == sampled_word(3, 9, 5, 17));
  CHECK(averaged_sum(h, 0.3, 12, MonteCarloSpec{7, 300}).value ==
        averaged_sum(h, 0.3, 12, MonteCarloSpec{7, 300}).value);
  CHECK_THROWS_AS(averaged_sum(h, 0.3, 5, MonteCarloSpec{7, 0}), InvalidInput);
  CHECK_THROWS_AS(averaged_sum(h.with_budget(100), 0.3, 12), BudgetExceeded);
}

TEST_CASE("lyapunov profiles") {
  const std::vector<int> schedule{1, 2, 4, 8, 12, 16};
  const auto d = lyapunov_profile(catalog::doubling_pair(), 0.2, schedule);
  for (double l : d.lambda) CHECK(std::abs(l - std::log(2.0)) <= 1e-12);
  CHECK(d.lower == d.upper);
  CHECK(d.tail_within(0.69, 0.7));

  const auto h = lyapunov_profile(catalog::heterogeneous_pair(), 0.7, schedule);
  for (double l : h.lambda) CHECK(l == doctest::Approx(0.5 * (std::log(2.0) + std::log(3.0))).epsilon(1e-13));

  const auto c = lyapunov_profile(catalog::cantor_k1(), 2.0 / 9.0, std::vector<int>{1, 2, 3});
  for (double l : c.lambda) CHECK(l == doctest::Approx(std::log(3.0)));

  CHECK_THROWS_AS(lyapunov_profile(catalog::doubling_pair(), 0.2, std::vector<int>{}), InvalidInput);
  CHECK_THROWS_AS(lyapunov_profile(catalog::doubling_pair(), 0.2, std::vector<int>{3, 2}), InvalidInput);
}

TEST_CASE("tempered diagnostic against exhaustive minimum") {
  const auto sys = wavy_triple();
  const double x = 0.27, eps = 0.05;
  for (int n_max = 1; n_max <= 5; ++n_max) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
      const double avg = naive_average(sys, x, n);
      for (int m = 1; m <= n; ++m) {
        for (const Word& w : enumerate_level(3, m)) best = std::min(best, avg - naive_word_sum(sys, w, x) + n * eps);
      }
    }
    const auto diag = tempered_diagnostic(sys, x, eps, n_max);
    CHECK(diag.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(std::isfinite(diag.value));
    CHECK(diag.heuristic);
    // the witness reproduces the value
    CHECK(averaged_sum(sys, x, diag.witness_n).value - naive_word_sum(sys, diag.witness, x) + diag.witness_n * eps ==
          doctest::Approx(diag.value).epsilon(1e-12));
  }
  double prev = std::numeric_limits<double>::infinity();
  for (int n_max = 1; n_max <= 8; ++n_max) {
    const double v = tempered_diagnostic(sys, x, eps, n_max).value;
    CHECK(v <= prev);
    prev = v;
  }
  // equal constant potentials: every single-word sum equals the average
  const auto d = tempered_diagnostic(catalog::doubling_pair(), 0.1, 0.1, 6);
  CHECK(d.value == doctest::Approx(0.1));
  CHECK_THROWS_AS(tempered_diagnostic(sys, x, 0.0, 3), InvalidInput);
}
