#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sgdm {

using Vector = std::vector<double>;
using ConstView = std::span<const double>;
using MutView = std::span<double>;

inline double dot(ConstView a, ConstView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(ConstView a) { return dot(a, a); }
inline double norm(ConstView a) { return std::sqrt(norm_sq(a)); }

inline double dist_sq(ConstView a, ConstView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double dist(ConstView a, ConstView b) { return std::sqrt(dist_sq(a, b)); }

inline bool all_finite(ConstView a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace sgdm
