#include "semipress/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "semipress/errors.hpp"

namespace semipress {

std::vector<double> geometric_scales(double base, int first, int last) {
  if (!(base > 1.0)) throw InvalidInput("scale base must exceed 1");
  if (first > last) throw InvalidInput("empty scale schedule");
  std::vector<double> out;
  for (int j = first; j <= last; ++j) out.push_back(std::pow(base, -j));
  return out;
}

std::size_t box_count(std::span<const double> points, double r) {
  if (!(r > 0.0)) throw InvalidInput("box size must be positive");
  std::vector<long long> boxes;
  boxes.reserve(points.size());
  for (double x : points) boxes.push_back(static_cast<long long>(std::floor(x / r + 1e-9)));
  std::sort(boxes.begin(), boxes.end());
  return static_cast<std::size_t>(std::unique(boxes.begin(), boxes.end()) - boxes.begin());
}

BoxCountProfile box_dimension(const SetSample& z, std::span<const double> scales) {
  if (scales.empty()) throw InvalidInput("box schedule must be nonempty");
  BoxCountProfile out;
  std::vector<double> sorted(scales.begin(), scales.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.scales.push_back(sorted[i]);
    out.counts.push_back(box_count(z.points, sorted[i]));
    out.in_window.push_back(false);
    if (sorted[i] >= 3.0 * z.mesh) valid.push_back(i);
  }
  if (valid.empty()) throw InvalidInput("every box scale lies below three sample meshes");
  const std::size_t drop = valid.size() / 5;  // floor(0.2 * len) from each end
  std::vector<std::size_t> fit(valid.begin() + static_cast<std::ptrdiff_t>(drop),
                               valid.end() - static_cast<std::ptrdiff_t>(drop));
  for (std::size_t i : fit) out.in_window[i] = true;
  out.fit_points = fit.size();
  if (fit.size() < 2) {
    out.slope = 0.0;
    out.intercept = std::log(static_cast<double>(out.counts[fit.front()]));
    return out;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i : fit) {
    const double x = -std::log(out.scales[i]);
    const double y = std::log(static_cast<double>(out.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(fit.size());
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.intercept = (sy - out.slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i : fit) {
    const double e = std::log(static_cast<double>(out.counts[i])) - (out.intercept - out.slope * std::log(out.scales[i]));
    ss += e * e;
  }
  out.residual = std::sqrt(ss / m);
  return out;
}

std::size_t ball_cover_count(const SetSample& z, double r) {
  if (!(r >= 3.0 * z.mesh)) throw InvalidInput("ball radius below three sample meshes");
  const auto& p = z.points;
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < p.size()) {
    // furthest sample point still within r of the first uncovered point
    const auto c = std::partition_point(p.begin() + static_cast<std::ptrdiff_t>(i), p.end(),
                                        [&](double x) { return x - p[i] < r; }) - 1;
    const double centre = *c;
    ++count;
    i = static_cast<std::size_t>(std::partition_point(c, p.end(), [&](double x) { return x - centre < r; }) -
                                 p.begin());
  }
  return count;
}

double hausdorff_ball_sum(const SetSample& z, double t, double r) {
  return static_cast<double>(ball_cover_count(z, r)) * std::pow(2.0 * r, t);
}

}  // namespace semipress
