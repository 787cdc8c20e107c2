#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sgdm/config.hpp"
#include "sgdm/diagnostics.hpp"
#include "sgdm/rates.hpp"
#include "sgdm/trajectory.hpp"

namespace sgdm {

/// Medians over the decades (H/10^{j+1}, H/10^j] of the horizon H, newest first.
struct DecadeProfile {
  std::vector<std::size_t> upper;  // H/10^j
  std::vector<double> grad_norm;
  std::vector<double> xz_gap;  // ||x^k - z^k|| = lambda/(1-lambda) ||x^k - x^{k-1}||
  std::vector<double> spread;  // d_k of windows with gamma_k in the decade (NaN if none)
};

struct SeedResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string divergence_reason;
  std::size_t last_index = 0;
  std::size_t region_exits = 0;

  double final_f_gap = std::numeric_limits<double>::quiet_NaN();
  double final_grad_norm = 0.0;
  double final_dist = std::numeric_limits<double>::quiet_NaN();
  std::optional<EmpiricalRate> rate_f_gap;
  std::optional<EmpiricalRate> rate_grad_sq;
  std::optional<EmpiricalRate> rate_dist;

  std::size_t windows = 0;
  std::optional<std::size_t> K_T;
  std::size_t bounds_checked = 0;
  std::size_t bounds_violations = 0;
  std::size_t bounds_violations_before = 0;
  std::size_t descent_checked = 0;
  std::size_t descent_violations = 0;
  std::size_t descent_violations_before = 0;
  std::size_t ledger_increases = 0;

  std::optional<StepLowerBound> step_lower_bound;
  double boundary_path_length = 0.0;  // last Cauchy partial sum

  DecadeProfile decades;
};

struct WindowLengthSummary {
  double T = 0.0;
  double delta = 0.9;
  std::size_t windows = 0;
  std::optional<std::size_t> k_delta;
  std::optional<std::size_t> k_delta_certified;
  std::size_t violations = 0;
};

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunSummary {
  std::string config_hash;
  std::string canonical_config;
  std::string problem;
  std::string schedule;
  std::string noise;
  double lambda = 0.0;
  double nu = 0.0;
  double L = 0.0;
  double theta = 0.5;
  std::size_t horizon = 0;

  std::vector<SeedResult> seeds;  // ordered by seed index
  std::size_t divergent = 0;

  std::optional<RatePrediction> prediction;
  std::optional<double> median_rate_f_gap;
  std::optional<double> median_rate_grad_sq;
  std::optional<double> median_rate_dist;
  std::optional<double> median_final_f_gap;
  DecadeProfile median_decades;

  std::optional<WindowLengthSummary> window_lengths;
  std::vector<CriterionResult> criteria;

  bool passed() const;
};

/// Trajectories kept for trace emission (seed index + data).
struct KeptTrajectory {
  std::size_t index = 0;
  Trajectory trajectory;
  std::optional<WindowDiagnostics> diagnostics;
};

struct ExperimentResult {
  RunSummary summary;
  std::vector<KeptTrajectory> traces;
};

/// Runs every seed (in parallel), evaluates diagnostics and targets. Seeds are
/// base_seed + seed_offset + i; aggregation is ordered by i.
ExperimentResult run_experiment(const ExperimentConfig& config, std::uint64_t seed_offset = 0);

/// Monotone decrease of decade medians from oldest to newest; equal zeros pass,
/// NaN entries are skipped.
bool decreasing_decades(const std::vector<double>& newest_first);

}  // namespace sgdm
