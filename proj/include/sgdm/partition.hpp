#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sgdm/optimizer.hpp"
#include "sgdm/schedule.hpp"

namespace sgdm {

/// Time indices gamma_1 = 1 < gamma_2 < ... for a time window T, truncated at
/// the horizon. Window w (0-based) is Gamma_{w+1} = (gamma[w], gamma[w+1]];
/// only complete windows (gamma[w+1] <= horizon) are listed.
struct WindowPartition {
  double T = 0.0;
  std::size_t horizon = 0;
  std::vector<std::size_t> gamma;
  std::vector<double> delta;  // Delta_{gamma[w], gamma[w+1]} per complete window

  std::size_t windows() const noexcept { return delta.size(); }

  /// Window containing iterate t in (1, horizon], or nullopt past the last complete window.
  std::optional<std::size_t> window_of(std::size_t t) const;
};

/// T = (1 - lambda)^3 / (50 L (1 + 2 nu)^2).
double default_window(double L, const MomentumParams& params);

/// Cap (1 - lambda)^2 / (20 L (1 + 2 nu)) under which the iterate bounds are claimed.
double iterate_bound_window_cap(double L, const MomentumParams& params);

/// gamma_{k+1} = max{gamma_k + 1, sup{n >= gamma_k : Delta_{gamma_k, n} <= T}}.
WindowPartition build_partition(const StepSchedule& schedule, double T, std::size_t horizon);

struct WindowLengthReport {
  double delta = 0.9;
  /// Smallest 1-based window index after which delta T <= Delta <= T holds to the horizon.
  std::optional<std::size_t> k_delta;
  /// First 1-based window with alpha_{gamma_k} <= (1 - delta) T; from there on
  /// every window is guaranteed to satisfy both bounds.
  std::optional<std::size_t> k_delta_certified;
  /// 1-based windows at or past k_delta_certified that violate a bound.
  std::vector<std::size_t> violations;
  std::vector<double> lengths;  // Delta per window, recomputed from the schedule
};

WindowLengthReport verify_window_lengths(const WindowPartition& partition,
                                         const StepSchedule& schedule, double delta = 0.9);

}  // namespace sgdm
