#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "sgdm/optimizer.hpp"
#include "sgdm/partition.hpp"
#include "sgdm/problem.hpp"
#include "sgdm/trajectory.hpp"

namespace sgdm {

/// s_k for every complete window reached by the trajectory, replayed from the
/// counter-addressed noise stream (or the stored noise log).
std::vector<double> aggregate_errors(const Trajectory& trajectory, const WindowPartition& partition);

/// d_k = max(max_t ||x^t - x^{gamma_k}||, max_t ||z^t - z^{gamma_k}||) over Gamma_k.
/// Uses the streaming maxima when the run tracked this partition, else the stored iterates.
std::vector<double> iterate_spread(const Trajectory& trajectory, const WindowPartition& partition,
                                   double lambda);

/// First 1-based window index k at which alpha_{gamma_k} <= (1 - 0.99) T,
/// L nu alpha_{gamma_k} <= lambda iota and L nu^2 alpha_{gamma_k} <= lambda^2 / 80
/// with iota = min{1/10, nu (1 - lambda)/(1 + 2 nu)} / 10. Since alpha is
/// non-increasing the conditions then hold for all later windows.
std::optional<std::size_t> applicability_index(const WindowPartition& partition,
                                               const StepSchedule& schedule, double L,
                                               const MomentumParams& params);

/// One row of the window ledger. Residuals are RHS - LHS (negative = violated).
struct WindowRow {
  std::size_t k = 0;  // 1-based window index
  std::size_t gamma_k = 0;
  std::size_t gamma_next = 0;
  double delta = 0.0;
  double s = 0.0;
  double d = 0.0;
  double u = 0.0;  // 8/((1-lambda) T) sum_{i>=k} s_i^2, truncated at the horizon
  double merit = 0.0;
  double grad_merit_norm = 0.0;
  double xz_gap = 0.0;  // ||z^{gamma_k} - x^{gamma_k}||
  double res_bound_spread = 0.0;  // d_k^2 bound
  double res_bound_gap = 0.0;     // ||z - x||^2 contraction across the window
  double res_descent = 0.0;
  bool applicable = false;
};

struct WindowDiagnostics {
  double T = 0.0;
  std::optional<std::size_t> K_T;
  std::vector<WindowRow> rows;
  double merit_last = 0.0;  // M at the closing boundary of the last window
};

/// Full ledger for the complete windows of a trajectory recorded with a partition.
WindowDiagnostics diagnose_windows(const Trajectory& trajectory, const Problem& problem,
                                   const MomentumParams& params);

/// Residual tolerance 1e-8 (1 + |M_k|).
double residual_tolerance(double merit);

struct IterateBoundsReport {
  std::optional<std::size_t> K_T;
  std::vector<double> res_spread;  // d_k^2 <= 3/2 ||z-x||^2 + 15 [T^2 ||grad f(z)||^2 + s^2]/(1-lambda)^2
  std::vector<double> res_gap;     // next ||z-x||^2 <= (1+lambda)/2 ||z-x||^2 + 8 [T^2 ||grad f(z)||^2 + 4 s^2]/(1-lambda)^3
  std::size_t checked = 0;           // windows at or past K_T
  std::size_t violations = 0;        // among checked
  std::size_t violations_before = 0; // before K_T (reported, not asserted)
};

/// Throws InapplicableWindow when T exceeds (1-lambda)^2 / (20 L (1+2 nu)).
IterateBoundsReport check_iterate_bounds(const Trajectory& trajectory, const Problem& problem,
                                         const MomentumParams& params);
IterateBoundsReport check_iterate_bounds(const WindowDiagnostics& diag);

struct DescentLedger {
  std::optional<std::size_t> K_T;
  std::vector<double> merit;
  std::vector<double> u;
  std::vector<double> ledger;  // M_k + u_k
  std::vector<double> residual;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t violations_before = 0;
  std::size_t ledger_increases = 0;  // M_{k+1}+u_{k+1} > M_k+u_k + tol past K_T
};

/// Throws InapplicableWindow when T exceeds (1-lambda)^3 / (50 L (1+2 nu)^2).
DescentLedger check_descent(const Trajectory& trajectory, const Problem& problem,
                            const MomentumParams& params);
DescentLedger check_descent(const WindowDiagnostics& diag);

struct StepLowerBound {
  std::size_t checked = 0;
  std::size_t satisfied = 0;  // ||x^{k+1} - x^k|| >= alpha_k - 1e-12
  double total_length = 0.0;  // sum_k ||x^{k+1} - x^k||
};

struct CauchyProfile {
  std::vector<double> boundary_partial_sums;  // sum_{j<=k} ||x^{gamma_{j+1}} - x^{gamma_j}||
  std::vector<double> intra_window_max;       // max_{t in Gamma_k} ||x^t - x^{gamma_k}||
  std::optional<StepLowerBound> step_lower_bound;
};

/// The per-step lower bound needs stride-1 scalar records.
CauchyProfile cauchy_profile(const Trajectory& trajectory, bool step_lower_bound = false);

struct UnitBeta {};
/// beta_k = Delta_k^r.
struct PowerBeta {
  double r = 1.0;
};
/// beta_{gamma_k} supplied per window.
struct CustomBeta {
  std::vector<double> values;
};
using BetaSpec = std::variant<UnitBeta, PowerBeta, CustomBeta>;

struct SummabilityProfile {
  std::vector<double> partial_sums;  // sum_{j<=k} beta_{gamma_j}^2 s_j^2
  /// (total - partial sum before the last decade of iterates) / total; 0 for a zero series.
  double last_decade_ratio = 0.0;
};

SummabilityProfile summability_profile(const std::vector<double>& s, const WindowPartition& partition,
                                       const StepSchedule& schedule, const BetaSpec& beta);

}  // namespace sgdm
