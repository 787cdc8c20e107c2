#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgdm/noise.hpp"
#include "sgdm/optimizer.hpp"
#include "sgdm/partition.hpp"
#include "sgdm/problem.hpp"
#include "sgdm/schedule.hpp"

namespace sgdm {

struct RecordingPolicy {
  std::size_t stride = 1;  // scalar record every stride-th iterate (first and last always kept)
  /// When set, boundary vectors and streaming per-window maxima are captured.
  std::shared_ptr<const WindowPartition> partition;
  bool store_all = false;  // keep every x^k and e^k (oracle tests, short runs)
  double divergence_cap = 1e12;
};

/// Scalars for iterate x^k. alpha is alpha_k (NaN when the schedule ends
/// before k); dist is NaN when x_star is unknown; move is ||x^k - x^{k-1}||.
struct StepRecord {
  std::size_t k = 0;
  double alpha = 0.0;
  double f = 0.0;
  double grad_norm = 0.0;
  double dist = 0.0;
  double move = 0.0;
};

/// x^{gamma_k} and x^{gamma_k - 1}.
struct BoundaryRecord {
  std::size_t index = 0;
  Vector x;
  Vector x_prev;
};

/// Streaming maxima over one window Gamma_k.
struct WindowStream {
  double s = 0.0;       // max_t ||sum_{i=gamma_k}^{t-1} alpha_i e^i||
  double max_dx = 0.0;  // max_t ||x^t - x^{gamma_k}||
  double max_dz = 0.0;  // max_t ||z^t - z^{gamma_k}||
};

/// Everything needed to reproduce a run.
struct RunSpec {
  Problem problem;
  MomentumParams params;
  StepSchedule schedule = StepSchedule::constant(1.0);
  NoiseModel noise;
  std::uint64_t seed = 0;
  std::size_t horizon = 1;
  Vector x0;
};

struct Trajectory {
  RunSpec spec;
  std::vector<StepRecord> steps;
  std::vector<BoundaryRecord> boundaries;
  std::vector<WindowStream> windows;
  std::shared_ptr<const WindowPartition> partition;
  std::vector<Vector> iterates;  // x^1..x^K under store_all
  std::vector<Vector> noises;    // e^1..e^{K-1} under store_all
  bool noise_replayable = true;

  std::size_t last_index = 1;  // index of the last finite iterate
  Vector x_last;
  Vector x_last_prev;
  bool diverged = false;
  std::string divergence_reason;
  std::size_t region_exits = 0;  // iterates outside the region where L is declared

  NoiseStream noise_stream() const { return NoiseStream(spec.seed); }
};

/// Runs SGDM from x^1 = x^0 = x0 (all ones when empty) for horizon iterates.
/// Deterministic in (spec, policy). Divergence stops the run and sets the flag;
/// the records up to the last finite iterate are kept.
Trajectory run_trajectory(RunSpec spec, const RecordingPolicy& policy = {});

}  // namespace sgdm
