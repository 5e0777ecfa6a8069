#pragma once

#include <span>
#include <vector>

#include "semipress/pressure.hpp"

namespace semipress {

/// Occupied-box counts of a sample with a least-squares slope of log N(r)
/// against log(1/r). A box-counting surrogate, not a Hausdorff infimum.
struct BoxCountProfile {
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  std::vector<bool> in_window;  // scale used by the fit
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit
  std::size_t fit_points = 0;
};

/// Geometric schedule base^-j for j = first..last.
std::vector<double> geometric_scales(double base, int first, int last);

/// Scales below 3 meshes are outside the validity window; the fit uses the
/// middle 60% of the scales inside it.
BoxCountProfile box_dimension(const SetSample& z, std::span<const double> scales);

/// Occupied boxes of side r (box index floor(x/r)).
std::size_t box_count(std::span<const double> points, double r);

/// Sum of (2r)^t over a left-to-right cover by open balls of radius r
/// centred at sample points. An upper bound on the ball-cover infimum.
double hausdorff_ball_sum(const SetSample& z, double t, double r);

/// Number of balls used by hausdorff_ball_sum.
std::size_t ball_cover_count(const SetSample& z, double r);

}  // namespace semipress
