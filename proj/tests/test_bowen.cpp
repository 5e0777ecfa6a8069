#include <cmath>
#include <random>

#include "doctest.h"
#include "semipress/bowen.hpp"
#include "semipress/errors.hpp"

using namespace semipress;

namespace {

// max over every word of length <= n of d(f_w x, f_w y), by full enumeration
double brute_bowen(const SemigroupSystem& sys, int n, double x, double y) {
  double best = sys.distance(x, y);
  for (int m = 1; m <= n; ++m) {
    for (const Word& w : enumerate_level(sys.k(), m)) {
      best = std::max(best, sys.distance(apply_word(sys, w, x), apply_word(sys, w, y)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("bowen distance examples") {
  const auto d = catalog::doubling_pair();
  CHECK(bowen_distance(d, 0, 0.1, 0.3) == doctest::Approx(0.2));
  CHECK(bowen_distance(d, 5, 0.0, 0.001) == doctest::Approx(0.032).epsilon(1e-12));
  CHECK(bowen_distance(d, 7, 0.4, 0.4) == 0.0);
  CHECK(bowen_distance(d, 5, 0.0, 0.001, 0.01) >= 0.01);
}

TEST_CASE("bowen distance against brute force") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& sys : {catalog::doubling_pair(), catalog::heterogeneous_pair()}) {
    for (int trial = 0; trial < 40; ++trial) {
      const double x = u(rng);
      const double y = std::fmod(x + 0.02 * u(rng), 1.0);
      const int n = static_cast<int>(rng() % 9);
      const double fast = bowen_distance(sys, n, x, y);
      CHECK(std::abs(fast - brute_bowen(sys, n, x, y)) <= 1e-12);
      if (n > 0) CHECK(bowen_distance(sys, n - 1, x, y) <= fast);
    }
  }
}

TEST_CASE("exact arcs") {
  const auto d = catalog::doubling_pair();
  const auto b = bowen_ball_interval(d, 0.5, 3, 0.1);
  REQUIRE(b.interval);
  CHECK(b.interval->radius == doctest::Approx(0.0125));
  CHECK(bowen_ball_interval(d, 0.3, 0, 0.1).interval->radius == doctest::Approx(0.1));

  const auto c = catalog::cantor_k1();
  const auto bc = bowen_ball_interval(c, 0.0, 2, 0.05);
  REQUIRE(bc.interval);
  CHECK(bc.interval->radius == doctest::Approx(0.05 / 9.0));

  // too large for the circle: wrap-around components appear
  CHECK(bowen_ball_interval(d, 0.3, 2, 0.4).fallback);
}

TEST_CASE("arc and implicit membership agree") {
  const auto check = [](const SemigroupSystem& sys, double x, int n, double delta) {
    const auto ball = bowen_ball_interval(sys, x, n, delta);
    REQUIRE(ball.interval);
    const double r = ball.interval->radius;
    CHECK(bowen_ball_membership(sys, ball, x));
    int probes = 0;
    for (int i = 0; i < 1000; ++i) {
      const double y = sys.domain().normalize(x + r * (-3.0 + 6.0 * (i + 0.5) / 1000.0));
      if (!sys.domain().contains(y)) continue;
      ++probes;
      CHECK(arc_membership(sys, ball, y) == bowen_ball_membership(sys, ball, y));
    }
    CHECK(probes > 0);
  };
  check(catalog::doubling_pair(), 0.5, 3, 0.1);
  check(catalog::doubling_pair(), 0.01, 6, 0.05);
  check(catalog::heterogeneous_pair(), 0.77, 5, 0.1);
  check(catalog::heterogeneous_pair(), 0.001, 4, 0.2);
  check(catalog::cantor_k1(), 0.0, 2, 0.05);

  // Cantor probes: a cylinder at depth 12 inside a ball of radius 0.2 * 3^-4
  const auto c = catalog::cantor_k1();
  const double x = 2.0 / 9.0 + 2.0 / 81.0;
  const auto ball = bowen_ball_interval(c, x, 4, 0.2);
  REQUIRE(ball.interval);
  for (double y : c.domain().lattice(0)) {
    if (std::abs(y - x) > 3 * ball.interval->radius) continue;
    CHECK(arc_membership(c, ball, y) == bowen_ball_membership(c, ball, y));
  }
}

TEST_CASE("ball nesting in n") {
  const auto h = catalog::heterogeneous_pair();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = u(rng), y = std::fmod(x + 0.05 * u(rng), 1.0);
    for (int n = 0; n < 6; ++n) {
      BowenBall outer{x, n, 0.1, std::nullopt, false};
      BowenBall inner{x, n + 1, 0.1, std::nullopt, false};
      if (bowen_ball_membership(h, inner, y)) CHECK(bowen_ball_membership(h, outer, y));
    }
  }
}

TEST_CASE("constant slope radius") {
  const SemigroupSystem triple("triple", Domain::circle(),
                               {PiecewiseAffineMap::circle_affine(3, 0.0), PiecewiseAffineMap::circle_affine(3, 0.5)});
  for (int n = 0; n <= 6; ++n) {
    const auto r = ball_radius(triple, 0.41, n, 0.1);
    CHECK(r.exact);
    CHECK(r.radius == doctest::Approx(0.1 * std::pow(3.0, -n)));
  }
}

TEST_CASE("intersection of word balls") {
  // B_n equals the intersection of the B_w over |w| = n: membership through the
  // suffix-closed conditions for each w must match the d_n test.
  const auto h = catalog::heterogeneous_pair();
  const double x = 0.3141, delta = 0.05;
  const int n = 4;
  for (int i = 0; i < 400; ++i) {
    const double y = x - 0.02 + 0.04 * (i + 0.5) / 400.0;
    bool all = true;
    for (const Word& w : enumerate_level(2, n)) {
      const Word wbar = reverse(w);
      for (int m = 0; m <= n && all; ++m) {
        const Word suffix(2, std::vector<std::uint8_t>(wbar.symbols().end() - m, wbar.symbols().end()));
        all = h.distance(apply_word(h, suffix, x), apply_word(h, suffix, y)) < delta;
      }
    }
    CHECK(all == (bowen_distance(h, n, x, y) < delta));
  }
}

TEST_CASE("inclusion certificates") {
  const auto d = catalog::doubling_pair();
  const auto ok = inclusion_check(d, 0.3, 6, 0.01, 0.1, 1.0);
  CHECK(ok.r_in <= ok.r_out);
  CHECK(ok.lambda_n == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(ok.verdicts.empty());
  CHECK(ok.inconsistent() == 0);

  const auto vacuous = inclusion_check(d, 0.3, 6, 0.01, 10.0, 1.0);
  CHECK(vacuous.inconsistent() == 0);

  // eta above e^{n eps} pushes the inner radius past the true ball
  const auto bad = inclusion_check(d, 0.3, 6, 0.01, 0.1, 3.0);
  CHECK(bad.inconsistent() > 0);
  CHECK_THROWS_AS(inclusion_check(d, 0.3, 6, 0.01, 0.1, 0.0), InvalidInput);
}
