#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgdm/noise.hpp"
#include "sgdm/optimizer.hpp"
#include "sgdm/problem.hpp"
#include "sgdm/schedule.hpp"

namespace sgdm {

enum class TargetRegime { none, global, loja };
enum class TraceMode { none, first, all };

struct ExperimentConfig {
  // problem.*
  std::string problem_name;
  std::size_t dim = 1;
  ProblemParams problem_params;
  Vector x0;  // empty: all ones

  // opt.* and schedule.*
  std::string preset = "custom";
  MomentumParams params;
  StepSchedule schedule = StepSchedule::constant(1.0);

  NoiseModel noise;

  // run.*
  std::size_t horizon = 1000;
  std::size_t seeds = 1;
  std::uint64_t base_seed = 0;
  std::size_t stride = 1;
  double divergence_cap = 1e12;
  std::size_t threads = 0;  // 0: hardware concurrency

  // windows.*
  bool windows_enabled = true;
  std::optional<double> T;  // default_window(L, params) when unset
  double delta = 0.9;

  // diag.*
  bool iterate_bounds = true;
  bool descent = true;
  bool cauchy = false;
  bool step_lower_bound = false;

  // targets.*
  TargetRegime regime = TargetRegime::none;
  double r = 1.0;
  std::optional<double> f_gap_tolerance;
  std::optional<double> dist_tolerance;
  std::optional<double> grad_sq_tolerance;
  std::optional<double> final_f_gap_max;
  bool stationarity = false;
  double grad_threshold = 1e-2;
  double fit_from = 0.1;  // fit exponents over k >= fit_from * horizon
  std::optional<double> min_total_length;

  // output.*
  std::string output_dir = "out";
  TraceMode traces = TraceMode::first;

  /// Sorted "key = value" lines of the accepted document; hashed into summaries.
  std::string canonical;
};

/// Parses and validates a flat key-value document:
///   # comment
///   section.key = value
/// Lists are comma separated. Throws ConfigError listing every bad field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace sgdm
