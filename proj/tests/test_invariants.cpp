#include "doctest.h"
#include "semipress/invariants.hpp"

using namespace semipress;

namespace {

std::vector<int> range(int a, int b) {
  std::vector<int> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("check records the worst margin and the first violation") {
  InvariantCheck c("demo");
  c.record(0.5, "a");
  c.record(-0.1, "b");
  c.record(-0.3, "c");
  CHECK(c.checks == 3);
  CHECK(c.violations == 2);
  CHECK(c.worst_margin == doctest::Approx(-0.3));
  CHECK(c.first_violation == "b");
  CHECK_FALSE(c.pass());
}

TEST_CASE("battery passes on small samples of the built-ins") {
  for (const auto& name : catalog::names()) {
    CAPTURE(name);
    const auto sys = catalog::by_name(name);
    BatterySettings s;
    s.depths = range(1, 8);
    s.cover.reference_resolution = 4096;
    s.lyapunov_points = 32;
    s.t_grid = {0.0, 0.6, 1.2};
    const bool cantor = name == "cantor_k1";
    const SetSample z = cantor ? SetSample::cantor(sys.domain(), 8) : SetSample::grid(sys.domain(), 512);
    s.deltas = cantor ? std::vector<double>{1.0 / 9, 1.0 / 27} : std::vector<double>{0.2, 0.1};
    const auto report = verify_invariants(sys, z, s);
    CHECK(report.system == sys.name());
    CHECK_FALSE(report.checks.empty());
    for (const auto& c : report.checks) {
      CAPTURE(c.name);
      CAPTURE(c.first_violation);
      CHECK(c.pass());
    }
    CHECK(report.all_pass());
  }
}
