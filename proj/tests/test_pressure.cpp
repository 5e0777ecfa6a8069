#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "semipress/errors.hpp"
#include "semipress/pressure.hpp"

using namespace semipress;

namespace {

// Left-to-right greedy with open arcs of one radius centred on lifted lattice
// points: from the first uncovered point take the furthest-reaching arc that
// still contains it. Optimal for equal weights.
std::size_t greedy_arc_count(std::vector<double> pts, const std::vector<double>& lattice, double rho, bool circle) {
  std::vector<double> centres;
  for (double c : lattice) {
    centres.push_back(c);
    if (circle) {
      centres.push_back(c - 1.0);
      centres.push_back(c + 1.0);
    }
  }
  std::sort(centres.begin(), centres.end());
  std::sort(pts.begin(), pts.end());
  std::size_t count = 0, i = 0;
  while (i < pts.size()) {
    double best = -1e9;
    for (double c : centres) {
      if (std::abs(pts[i] - c) < rho) best = std::max(best, c);
    }
    REQUIRE(best > -1e9);
    ++count;
    while (i < pts.size() && pts[i] - best < rho) ++i;
  }
  return count;
}

// Coverage on the line, each atom at its own lift (the engine cuts the circle at 0).
bool covers_on_line(const std::vector<Atom>& atoms, const std::vector<double>& pts) {
  return std::all_of(pts.begin(), pts.end(), [&](double p) {
    return std::any_of(atoms.begin(), atoms.end(),
                       [&](const Atom& a) { return std::abs(p - (a.center + a.shift)) < a.radius; });
  });
}

SemigroupSystem wavy_pair() {
  const auto d = catalog::doubling_pair();
  return d.with_potentials({Potential::function([](double x) { return 0.3 * std::sin(6.283185307179586 * x); }, "s"),
                            Potential::function([](double x) { return 0.2 * std::cos(6.283185307179586 * x); }, "c")});
}

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("set samples") {
  const auto g = SetSample::grid(Domain::circle(), 8);
  CHECK(g.size() == 8);
  CHECK(g.mesh == doctest::Approx(1.0 / 16));
  CHECK(SetSample::grid(Domain::interval(), 8).size() == 9);
  const auto c = SetSample::cantor(Domain::cantor(12), 10);
  CHECK(c.size() == 1024);
  CHECK(c.mesh == doctest::Approx(std::pow(3.0, -10)));
  CHECK(std::is_sorted(c.points.begin(), c.points.end()));
  const auto u = g.merged(SetSample::grid(Domain::circle(), 4));
  CHECK(u.size() == 8);
  CHECK_THROWS_AS(SetSample::grid(Domain::cantor(5), 8), InvalidInput);
  CHECK_THROWS_AS(SetSample::explicit_points(Domain::circle(), {}, 0.1), InvalidInput);
  CHECK_THROWS_AS(SetSample::explicit_points(Domain::cantor(6), {0.5}, 0.1), InvalidInput);
}

TEST_CASE("uniform covers match the greedy sweep") {
  const auto d = catalog::doubling_pair().with_potentials(zero_potentials(2));
  CoverSettings s;
  s.reference_resolution = 4096;
  const auto lattice = d.domain().lattice(s.reference_resolution);
  for (int res : {300, 1000, 2048}) {
    const auto z = SetSample::grid(d.domain(), res);
    for (double delta : {0.2, 0.1, 0.05}) {
      CoverProblem p(d, z, delta, s);
      for (int n = 0; n <= 6; ++n) {
        const auto cover = p.uniform_cover(n);
        CHECK(covers(d, cover, z));
        CHECK(cover.uniform());
        CHECK(cover.atoms.size() == greedy_arc_count(z.points, lattice, delta * std::pow(2.0, -n), true));
      }
    }
  }
}

TEST_CASE("cover count examples") {
  const auto d = catalog::doubling_pair().with_potentials(zero_potentials(2));
  const auto z = SetSample::grid(d.domain(), 1000);
  CoverProblem p(d, z, 0.1);
  // radius 0.1 * 2^-8 is below the grid spacing: one atom per point
  CHECK(p.uniform_cover(8).atoms.size() == 1000);
  // ordinary balls of radius 0.1: five arcs, one more when the cut at 0 costs an arc
  const auto n0 = p.uniform_cover(0).atoms.size();
  CHECK(n0 >= 5);
  CHECK(n0 <= 6);
  // non-saturated: every arc holds at most ceil(2*rho*R) grid points
  for (int n = 1; n <= 4; ++n) {
    const double rho = 0.1 * std::pow(2.0, -n);
    // open arc of length 2*rho*R grid spacings; the lattice is fine enough to place it freely
    const auto per_arc = static_cast<std::size_t>(std::floor(2.0 * rho * 1000.0 - 1e-9)) + 1;
    const auto count = p.uniform_cover(n).atoms.size();
    CHECK(count >= (1000 + per_arc - 1) / per_arc);
    CHECK(count <= (1000 + per_arc - 1) / per_arc + 2);
  }
  const auto single = SetSample::explicit_points(d.domain(), {0.25}, 1e-3);
  CoverProblem one(d, single, 0.05);
  CHECK(one.uniform_cover(5).atoms.size() == 1);
}

TEST_CASE("weighted DP is optimal") {
  // exhaustive search over atom subsets on a small instance with non-constant weights
  const auto sys = wavy_pair();
  CoverSettings s;
  s.reference_resolution = 12;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(std::floor(u(rng) * 96.0) / 96.0);
    const auto z = SetSample::explicit_points(sys.domain(), pts, 1e-3);
    CoverProblem p(sys, z, 0.2, s);
    const std::vector<int> depths{1, 2};
    const double alpha = 0.3 * u(rng);
    std::vector<Atom> pool;
    for (int n : depths) {
      for (const auto& a : p.candidates(n)) pool.push_back(a);
    }
    REQUIRE(pool.size() <= 22);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask < (1u << pool.size()); ++mask) {
      Cover c;
      double w = 0.0;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (mask & (1u << i)) {
          c.atoms.push_back(pool[i]);
          w += std::exp(-alpha * pool[i].depth + pool[i].log_weight);
        }
      }
      if (w < best && covers_on_line(c.atoms, z.points)) best = w;
    }
    const auto cover = p.mixed_cover(depths, alpha);
    CHECK(covers(sys, cover, z));
    CHECK(weighted_sum(cover, alpha) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("greedy weight strategy") {
  const auto sys = wavy_pair();
  const auto z = SetSample::grid(sys.domain(), 500);
  CoverSettings s;
  s.reference_resolution = 2048;
  CoverSettings g = s;
  g.strategy = Strategy::greedy_weight;
  CoverProblem exact(sys, z, 0.1, s);
  CoverProblem greedy(sys, z, 0.1, g);
  for (int n : {1, 3, 5}) {
    const auto ce = exact.uniform_cover(n);
    const auto cg = greedy.uniform_cover(n);
    CHECK(covers(sys, cg, z));
    CHECK(weighted_sum(cg, 0.0) >= weighted_sum(ce, 0.0) * (1.0 - 1e-12));
  }
  const std::vector<int> depths{2, 3, 4};
  const auto mixed = greedy.mixed_cover(depths, 0.5);
  CHECK(covers(sys, mixed, z));
}

TEST_CASE("weighted sums") {
  Cover c;
  c.atoms.push_back(Atom{0.3, 0, 4, 0.01, 4 * 0.5, 0, 0});
  CHECK(weighted_sum(c, 0.2) == doctest::Approx(std::exp(-0.2 * 4 + 4 * 0.5)));
  double prev = std::numeric_limits<double>::infinity();
  for (double a = -5.0; a <= 5.0; a += 0.5) {
    const double w = weighted_sum(c, a);
    CHECK(w < prev);
    prev = w;
  }
  CHECK(weighted_sum(c, 1e3) == doctest::Approx(0.0));

  const auto d = catalog::doubling_pair();  // Phi = {log 2, log 2}
  const auto z = SetSample::grid(d.domain(), 2048);
  CoverProblem p(d, z, 0.1);
  for (int n : {2, 4, 6}) {
    const auto cover = p.uniform_cover(n);
    CHECK(weighted_sum(cover, 0.0) == doctest::Approx(cover.atoms.size() * std::pow(2.0, n)).epsilon(1e-12));
  }
}

TEST_CASE("capacity pressure profiles") {
  const auto d = catalog::doubling_pair();
  const auto z = SetSample::grid(d.domain(), 4096);
  const auto lattice = d.domain().lattice(CoverSettings{}.reference_resolution);
  const auto depths = valid_depths(d, z, 0.05, range(1, 16));
  REQUIRE(depths == range(1, 5));

  // Phi = 0: growth of the cover count, checked against the sweep count
  CoverProblem zero(d.with_potentials(zero_potentials(2)), z, 0.05);
  const double theta = static_cast<double>(greedy_arc_count(lattice, lattice, 0.05, true));
  CHECK(zero.theta() == theta);
  const auto cap = capacity_pressure(zero, depths);
  for (const auto& e : cap.profile) {
    const double q = static_cast<double>(greedy_arc_count(z.points, lattice, 0.05 * std::pow(2.0, -e.n), true));
    CHECK(e.alpha_star == doctest::Approx(std::log(q / theta) / e.n).epsilon(1e-12));
    CHECK(std::abs(e.alpha_star - std::log(2.0)) < 0.01);
  }
  CHECK(cap.lower <= cap.upper);
  CHECK(cap.tail_begin == 3);

  // Phi = -log 2: weights 2^-N cancel the count growth
  CoverProblem neg(d.with_potentials(scaled(d.log_factors(), -1.0)), z, 0.05);
  const auto capn = capacity_pressure(neg, depths);
  for (std::size_t i = 0; i < depths.size(); ++i) {
    CHECK(capn.profile[i].alpha_star == doctest::Approx(cap.profile[i].alpha_star - std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(capn.profile[i].alpha_star) < 0.01);
  }

  // k = 1: ordinary capacity pressure of one map
  const auto c = catalog::cantor_k1();
  const auto zc = SetSample::cantor(c.domain(), 10);
  CoverProblem cz(c.with_potentials(zero_potentials(1)), zc, 1.0 / 27.0);
  for (const auto& e : capacity_pressure(cz, range(1, 5)).profile) {
    CHECK(e.alpha_star == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(capacity_pressure(cz, std::vector<int>{3, 2}), InvalidInput);
  CHECK_THROWS_AS(capacity_pressure(cz, std::vector<int>{0, 1}), InvalidInput);
}

TEST_CASE("variable-depth pressure") {
  const auto d = catalog::doubling_pair().with_potentials(zero_potentials(2));
  const auto z = SetSample::grid(d.domain(), 4096);
  CoverProblem p(d, z, 0.05);
  // no refinement budget: the uniform cover's critical value
  for (int n = 2; n <= 5; ++n) {
    const auto e = pesin_pressure(p, n, 0);
    CHECK(e.refinements_accepted == 0);
    CHECK(e.value == doctest::Approx(critical_value(p.uniform_cover(n), p.theta())).epsilon(1e-10));
    CHECK(covers(d, e.cover, z));
  }
  // homogeneous system: refinement cannot beat the best uniform depth by much
  const auto e = pesin_pressure(p, 3, 2);
  double best = std::numeric_limits<double>::infinity();
  for (int n = 3; n <= 5; ++n) best = std::min(best, critical_value(p.uniform_cover(n), p.theta()));
  CHECK(e.value <= best + 1e-10);
  CHECK(e.value >= best - 1e-3);
  CHECK(e.total_weight == doctest::Approx(p.theta()).epsilon(1e-6));

  // Cantor sample with cylinder-aligned radius: no refinement pays
  const auto c = catalog::cantor_k1().with_potentials(zero_potentials(1));
  const auto zc = SetSample::cantor(c.domain(), 10);
  CoverProblem pc(c, zc, 1.0 / 27.0);
  const auto ec = pesin_pressure(pc, 3, 2);
  CHECK(ec.value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("continuity modulus") {
  CHECK(continuity_modulus(catalog::doubling_pair(), 0.1).epsilon == 0.0);
  const SemigroupSystem line("line", Domain::interval(),
                             {PiecewiseAffineMap({{0.0, 1.0, 1.0, 0.0}}, false)},
                             Potentials{Potential::function([](double x) { return x; }, "x")});
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.2, 0.1, 0.05, 0.01, 0.001}) {
    const double eps = continuity_modulus(line, delta, 2048).epsilon;
    CHECK(eps <= delta);
    CHECK(eps >= delta - 1.0 / 2048);
    CHECK(eps <= prev);
    prev = eps;
  }
}

TEST_CASE("sup and centre variants") {
  const auto sys = wavy_pair();
  const auto z = SetSample::grid(sys.domain(), 512);
  CoverSettings centre;
  centre.reference_resolution = 2048;
  CoverSettings sup = centre;
  sup.variant = Variant::sup;
  CoverSettings probe = sup;
  probe.sup_probes = 5;
  for (double delta : {0.1, 0.05}) {
    CoverProblem pc(sys, z, delta, centre);
    CoverProblem ps(sys, z, delta, sup);
    CoverProblem pp(sys, z, delta, probe);
    const double eps = ps.epsilon();
    CHECK(eps > 0.0);
    for (int n : {1, 2, 3}) {
      const double a = critical_value(pc.uniform_cover(n), pc.theta());
      const double b = critical_value(ps.uniform_cover(n), ps.theta());
      const double c = critical_value(pp.uniform_cover(n), pp.theta());
      CHECK(b - a == doctest::Approx(eps).epsilon(1e-9));
      CHECK(c >= a - 1e-12);
      CHECK(c - a <= eps + 1e-9);
    }
  }
}
