#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "semipress/system.hpp"

namespace semipress {

/// d_n(x, y) = max over g in G_n of d(g x, g y). Since id is in G_1 this is the
/// maximum over all compositions of length <= n. The walk stops early once the
/// running maximum reaches `cap` and returns that (>= cap) value.
double bowen_distance(const SemigroupSystem& sys, int n, double x, double y,
                      double cap = std::numeric_limits<double>::infinity());

/// Symmetric arc (center - radius, center + radius) in lifted coordinates.
struct Arc {
  double radius;
};

struct BowenBall {
  double center = 0.0;
  int depth = 0;
  double delta = 0.0;
  std::optional<Arc> interval;  // exact realization when available
  bool fallback = false;        // exact realization was requested but not valid
};

/// Radius rho with B_n(x, delta) = (x - rho, x + rho) when `exact`. The arc is
/// exact when every composition of length <= n is affine on it; for circle
/// maps the radius must also stay clear of wrap-around.
struct BallRadius {
  double radius = 0.0;
  double max_expansion = 1.0;  // max |(f_w)'(x)| over |w| <= n
  bool exact = false;
};

BallRadius ball_radius(const SemigroupSystem& sys, double x, int n, double delta);

BowenBall bowen_ball_interval(const SemigroupSystem& sys, double x, int n, double delta);

/// y in B_n(x, delta), decided by the capped Bowen distance.
bool bowen_ball_membership(const SemigroupSystem& sys, const BowenBall& ball, double y);

/// Same test through the exact arc (requires ball.interval).
bool arc_membership(const SemigroupSystem& sys, const BowenBall& ball, double y);

struct InclusionVerdict {
  double y;
  double offset;
  bool expect_member;
  bool member;
  bool consistent() const { return expect_member == member; }
};

/// Finite-sample check of B(x, r_in) in B_n(x, delta) in B(x, r_out) with
/// r_in = eta*delta*exp(-n(lambda_n + eps)), r_out = delta*exp(-n(lambda_n - eps)).
struct InclusionCertificate {
  double x = 0.0;
  int n = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;
  double lambda_n = 0.0;
  double r_in = 0.0;
  double r_out = 0.0;
  std::vector<InclusionVerdict> verdicts;

  std::size_t inconsistent() const;
};

InclusionCertificate inclusion_check(const SemigroupSystem& sys, double x, int n, double delta, double epsilon,
                                     double eta);

}  // namespace semipress
