#include "sgdm/partition.hpp"

#include <algorithm>
#include <cmath>

#include "sgdm/errors.hpp"

namespace sgdm {

std::optional<std::size_t> WindowPartition::window_of(std::size_t t) const {
  if (t <= 1 || windows() == 0 || t > gamma[windows()]) return std::nullopt;
  // First gamma >= t closes the window holding t.
  auto it = std::lower_bound(gamma.begin(), gamma.begin() + static_cast<long>(windows()) + 1, t);
  return static_cast<std::size_t>(it - gamma.begin()) - 1;
}

double default_window(double L, const MomentumParams& params) {
  if (!(L > 0.0)) throw InvalidArgument("default_window: L must be positive");
  const double one_m = 1.0 - params.lambda();
  const double ext = 1.0 + 2.0 * params.nu();
  return one_m * one_m * one_m / (50.0 * L * ext * ext);
}

double iterate_bound_window_cap(double L, const MomentumParams& params) {
  const double one_m = 1.0 - params.lambda();
  return one_m * one_m / (20.0 * L * (1.0 + 2.0 * params.nu()));
}

WindowPartition build_partition(const StepSchedule& schedule, double T, std::size_t horizon) {
  if (!(T > 0.0)) throw InvalidArgument("build_partition: T must be positive");
  if (horizon < 2) throw InvalidArgument("build_partition: horizon must be >= 2");
  const std::size_t defined = schedule.length();  // 0 when unbounded
  WindowPartition part;
  part.T = T;
  part.horizon = horizon;
  part.gamma.push_back(1);
  std::size_t m = 1;
  while (m < horizon) {
    // Largest n with Delta_{m,n} <= T. A window that would run past the
    // horizon (or past an explicit list) is incomplete and dropped.
    std::size_t n = m;
    double acc = 0.0;
    bool complete = true;
    while (true) {
      if (defined != 0 && n > defined) {
        complete = false;
        break;
      }
      const double a = schedule(n);
      if (acc + a > T) break;
      if (n == horizon) {
        complete = false;
        break;
      }
      acc += a;
      ++n;
    }
    if (!complete) break;
    if (n == m) {
      n = m + 1;
      acc = schedule(m);
    }
    part.gamma.push_back(n);
    part.delta.push_back(acc);
    m = n;
  }
  return part;
}

WindowLengthReport verify_window_lengths(const WindowPartition& partition,
                                         const StepSchedule& schedule, double delta) {
  if (!(delta >= 0.0 && delta < 1.0))
    throw InvalidArgument("verify_window_lengths: delta must lie in [0, 1)");
  WindowLengthReport rep;
  rep.delta = delta;
  const double T = partition.T;
  const std::size_t W = partition.windows();
  rep.lengths.resize(W);
  std::vector<char> ok(W);
  for (std::size_t w = 0; w < W; ++w) {
    rep.lengths[w] = partial_sum_delta(schedule, partition.gamma[w], partition.gamma[w + 1]);
    ok[w] = delta * T <= rep.lengths[w] && rep.lengths[w] <= T;
    if (!rep.k_delta_certified && schedule(partition.gamma[w]) <= (1.0 - delta) * T)
      rep.k_delta_certified = w + 1;
  }
  std::size_t first_good = W;
  while (first_good > 0 && ok[first_good - 1]) --first_good;
  if (first_good < W) rep.k_delta = first_good + 1;
  if (rep.k_delta_certified)
    for (std::size_t w = *rep.k_delta_certified - 1; w < W; ++w)
      if (!ok[w]) rep.violations.push_back(w + 1);
  return rep;
}

}  // namespace sgdm
