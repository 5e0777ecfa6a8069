#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace semipress {

/// Number of trailing schedule entries standing in for liminf/limsup.
inline std::size_t tail_length(std::size_t size, double fraction = 0.25) {
  if (size == 0) return 0;
  auto n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(size) - 1e-12));
  return std::clamp<std::size_t>(n, 1, size);
}

template <class T>
std::span<const T> schedule_tail(std::span<const T> values, double fraction = 0.25) {
  const auto n = tail_length(values.size(), fraction);
  return values.subspan(values.size() - n);
}

template <class T>
bool strictly_increasing(std::span<const T> values) {
  return std::adjacent_find(values.begin(), values.end(), [](const T& a, const T& b) { return !(a < b); }) ==
         values.end();
}

}  // namespace semipress
