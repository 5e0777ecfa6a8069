#include "semipress/bowen.hpp"

#include <algorithm>
#include <cmath>

#include "semipress/cocycle.hpp"
#include "semipress/errors.hpp"

namespace semipress {

namespace {

struct Pair {
  double x;
  double y;
  int depth;
};

double max_generator_factor(const SemigroupSystem& sys) {
  double s = 0.0;
  for (int i = 0; i < sys.k(); ++i) s = std::max(s, sys.generator(i).max_factor());
  return s;
}

// How far a point p may move before crossing a branch boundary of g. On the
// Cantor domain only points of C matter, and those never come closer to an
// interior breakpoint than the middle gap allows.
double branch_room(const SemigroupSystem& sys, const PiecewiseAffineMap& g, double p) {
  if (sys.domain().kind() != DomainKind::cantor) return g.distance_to_breakpoint(p);
  double room = std::numeric_limits<double>::infinity();
  for (double b : g.breakpoints()) {
    if (b > 1.0 / 3.0 && b < 2.0 / 3.0) {
      room = std::min(room, p <= b ? 2.0 / 3.0 - p : p - 1.0 / 3.0);
    } else {
      room = std::min(room, std::abs(p - b));
    }
  }
  return room;
}

bool all_single_piece(const SemigroupSystem& sys) {
  for (int i = 0; i < sys.k(); ++i) {
    if (!sys.generator(i).single_piece()) return false;
  }
  return true;
}

}  // namespace

double bowen_distance(const SemigroupSystem& sys, int n, double x, double y, double cap) {
  if (n < 0) throw InvalidInput("negative Bowen depth");
  level_size(sys.k(), n, sys.word_budget());
  double best = sys.distance(x, y);
  if (best >= cap || n == 0) return best;
  std::vector<Pair> stack{{x, y, 0}};
  while (!stack.empty()) {
    const Pair p = stack.back();
    stack.pop_back();
    for (int i = 0; i < sys.k(); ++i) {
      const double fx = sys.apply(i, p.x);
      const double fy = sys.apply(i, p.y);
      best = std::max(best, sys.distance(fx, fy));
      if (best >= cap) return best;
      if (p.depth + 1 < n) stack.push_back({fx, fy, p.depth + 1});
    }
  }
  return best;
}

BallRadius ball_radius(const SemigroupSystem& sys, double x, int n, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("Bowen radius must be positive");
  if (n < 0) throw InvalidInput("negative Bowen depth");
  BallRadius out;
  const double s_max = max_generator_factor(sys);
  const bool wrap_ok = !sys.domain().is_circle() || delta * (1.0 + s_max) <= 1.0;

  if (all_single_piece(sys)) {
    out.max_expansion = std::pow(std::max(1.0, s_max), n);
    out.radius = delta / out.max_expansion;
    out.exact = wrap_ok;
    return out;
  }

  level_size(sys.k(), n, sys.word_budget());
  // Walk every composition of length < n, tracking the point, the cumulative
  // slope and how far the arc may extend before some branch boundary is hit.
  struct Node {
    double p;
    double slope;
    int depth;
  };
  double cell = std::numeric_limits<double>::infinity();
  double expansion = 1.0;
  std::vector<Node> stack{{x, 1.0, 0}};
  while (!stack.empty()) {
    const Node node = stack.back();
    stack.pop_back();
    if (node.depth >= n) continue;
    for (int i = 0; i < sys.k(); ++i) {
      const auto& g = sys.generator(i);
      cell = std::min(cell, branch_room(sys, g, node.p) / std::abs(node.slope));
      const double slope = node.slope * g.slope_at(node.p);
      expansion = std::max(expansion, std::abs(slope));
      stack.push_back({sys.apply(i, node.p), slope, node.depth + 1});
    }
  }
  out.max_expansion = expansion;
  out.radius = delta / expansion;
  out.exact = wrap_ok && out.radius <= cell;
  return out;
}

BowenBall bowen_ball_interval(const SemigroupSystem& sys, double x, int n, double delta) {
  BowenBall ball;
  ball.center = x;
  ball.depth = n;
  ball.delta = delta;
  const auto r = ball_radius(sys, x, n, delta);
  if (r.exact) {
    ball.interval = Arc{r.radius};
  } else {
    ball.fallback = true;
  }
  return ball;
}

bool bowen_ball_membership(const SemigroupSystem& sys, const BowenBall& ball, double y) {
  if (!sys.domain().contains(y)) return false;
  return bowen_distance(sys, ball.depth, ball.center, y, ball.delta) < ball.delta;
}

bool arc_membership(const SemigroupSystem& sys, const BowenBall& ball, double y) {
  if (!ball.interval) throw InvalidInput("ball has no exact arc realization");
  if (!sys.domain().contains(y)) return false;
  return sys.distance(ball.center, y) < ball.interval->radius;
}

std::size_t InclusionCertificate::inconsistent() const {
  return static_cast<std::size_t>(
      std::count_if(verdicts.begin(), verdicts.end(), [](const InclusionVerdict& v) { return !v.consistent(); }));
}

InclusionCertificate inclusion_check(const SemigroupSystem& sys, double x, int n, double delta, double epsilon,
                                     double eta) {
  if (!(eta > 0.0)) throw InvalidInput("eta must be positive");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  InclusionCertificate cert;
  cert.x = x;
  cert.n = n;
  cert.delta = delta;
  cert.epsilon = epsilon;
  cert.eta = eta;
  if (n > 0) {
    const int depth[] = {n};
    cert.lambda_n = lyapunov_profile(sys, x, depth).lambda.front();
  }
  cert.r_in = eta * delta * std::exp(-n * (cert.lambda_n + epsilon));
  cert.r_out = delta * std::exp(-n * (cert.lambda_n - epsilon));

  BowenBall ball;
  ball.center = x;
  ball.depth = n;
  ball.delta = delta;
  const auto& dom = sys.domain();
  const double half_span = dom.is_circle() ? 0.5 : 1.0;

  auto probe = [&](double offset, bool expect_member) {
    for (double sign : {-1.0, 1.0}) {
      const double y = dom.normalize(x + sign * offset);
      if (!dom.contains(y)) continue;
      if (std::abs(dom.distance(x, y) - offset) > 1e-12 * std::max(1.0, offset)) continue;
      cert.verdicts.push_back({y, offset, expect_member, bowen_ball_membership(sys, ball, y)});
    }
  };
  for (double f : {0.25, 0.5, 0.9, 1.0 - 1e-6}) {
    if (cert.r_in * f < half_span) probe(cert.r_in * f, true);
  }
  for (double f : {1.0 + 1e-6, 1.1, 1.5, 2.0}) {
    if (cert.r_out * f < half_span) probe(cert.r_out * f, false);
  }
  return cert;
}

}  // namespace semipress
