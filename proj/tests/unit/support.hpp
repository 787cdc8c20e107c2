#pragma once

#include <cstdint>
#include <random>

#include "sgdm/vector_ops.hpp"

namespace testing_support {

// Fixed-seed generator so property tests are reproducible.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng());
}

inline sgdm::Vector random_vector(std::size_t d, double lo, double hi) {
  sgdm::Vector v(d);
  for (auto& x : v) x = uniform(lo, hi);
  return v;
}

inline sgdm::Vector random_in_ball(const sgdm::Vector& c, double r) {
  sgdm::Vector v(c.size());
  double n2;
  do {
    for (auto& x : v) x = uniform(-1.0, 1.0);
    n2 = sgdm::norm_sq(v);
  } while (n2 > 1.0 || n2 == 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c[i] + r * v[i];
  return v;
}

}  // namespace testing_support
