#include <cmath>
#include <set>

#include "doctest.h"
#include "semipress/dimension.hpp"
#include "semipress/errors.hpp"

using namespace semipress;

namespace {

// Distinct boxes by a set of integer indices, without sorting tricks.
std::size_t naive_boxes(const std::vector<double>& pts, double r) {
  std::set<long long> seen;
  for (double x : pts) seen.insert(static_cast<long long>(std::floor(x / r + 1e-9)));
  return seen.size();
}

}  // namespace

TEST_CASE("geometric scales") {
  const auto s = geometric_scales(2.0, 1, 4);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[3] == doctest::Approx(0.0625));
  CHECK_THROWS_AS(geometric_scales(1.0, 1, 3), InvalidInput);
  CHECK_THROWS_AS(geometric_scales(2.0, 3, 1), InvalidInput);
}

TEST_CASE("box counts agree with a set-based count") {
  const auto z = SetSample::cantor(Domain::cantor(12), 8);
  for (double r : geometric_scales(2.0, 1, 10)) CHECK(box_count(z.points, r) == naive_boxes(z.points, r));
  CHECK_THROWS_AS(box_count(z.points, 0.0), InvalidInput);
}

TEST_CASE("grid has slope one") {
  const auto z = SetSample::grid(Domain::circle(), 4096);
  const auto scales = geometric_scales(2.0, 1, 12);
  const auto prof = box_dimension(z, scales);
  CHECK(prof.slope == doctest::Approx(1.0).epsilon(0.02));
  CHECK(prof.fit_points >= 2);
  // boxes of side 2^-j hold 2^j grid points each
  for (std::size_t i = 0; i < prof.scales.size(); ++i) {
    if (prof.in_window[i]) CHECK(prof.counts[i] == static_cast<std::size_t>(std::llround(1.0 / prof.scales[i])));
  }
}

TEST_CASE("cantor sample counts double per triadic scale") {
  const auto z = SetSample::cantor(Domain::cantor(12), 10);
  const auto scales = geometric_scales(3.0, 1, 9);
  const auto prof = box_dimension(z, scales);
  for (std::size_t j = 0; j < prof.scales.size(); ++j) {
    CHECK(prof.counts[j] == (std::size_t{1} << (j + 1)));
  }
  CHECK(prof.slope == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(0.02));
  CHECK(prof.residual < 1e-9);
}

TEST_CASE("single point has slope zero") {
  const auto z = SetSample::explicit_points(Domain::circle(), {0.3}, 1e-6, "point");
  const auto prof = box_dimension(z, geometric_scales(2.0, 1, 10));
  CHECK(prof.slope == doctest::Approx(0.0));
}

TEST_CASE("scales below the mesh window are rejected") {
  const auto z = SetSample::grid(Domain::circle(), 64);
  CHECK_THROWS_AS(box_dimension(z, geometric_scales(2.0, 12, 14)), InvalidInput);
  CHECK_THROWS_AS(ball_cover_count(z, 1e-3), InvalidInput);
  const auto prof = box_dimension(z, geometric_scales(2.0, 1, 14));
  for (std::size_t i = 0; i < prof.scales.size(); ++i) {
    if (prof.scales[i] < 3.0 * z.mesh) CHECK_FALSE(prof.in_window[i]);
  }
}

TEST_CASE("ball sums") {
  const auto z = SetSample::grid(Domain::interval(), 8192);
  const double r = 0.01;
  const auto n = ball_cover_count(z, r);
  // intervals of length just under 2r tile [0, 1]
  CHECK(static_cast<double>(n) == doctest::Approx(1.0 / (2.0 * r)).epsilon(0.05));
  CHECK(hausdorff_ball_sum(z, 0.0, r) == doctest::Approx(static_cast<double>(n)));
  CHECK(hausdorff_ball_sum(z, 1.0, r) == doctest::Approx(1.0).epsilon(0.05));
  double prev = hausdorff_ball_sum(z, 0.0, r);
  for (double t = 0.1; t <= 2.0; t += 0.1) {
    const double s = hausdorff_ball_sum(z, t, r);
    CHECK(s <= prev);
    prev = s;
  }
}

TEST_CASE("cantor ball sum at the similarity dimension stays bounded") {
  const auto z = SetSample::cantor(Domain::cantor(12), 10);
  const double t = std::log(2.0) / std::log(3.0);
  for (int j = 2; j <= 6; ++j) {
    const double r = std::pow(3.0, -j);
    const double s = hausdorff_ball_sum(z, t, r);
    CHECK(s >= 0.5);
    CHECK(s <= 2.0);
  }
}
