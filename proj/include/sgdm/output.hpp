#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sgdm/diagnostics.hpp"
#include "sgdm/experiment.hpp"

namespace sgdm {

/// Summary as an indented JSON document (no timestamps; byte-stable).
std::string summary_json(const RunSummary& summary);

/// "k,alpha_k,f_gap,grad_norm,dist_to_min" rows for the recorded iterates.
void write_steps_csv(const Trajectory& trajectory, const std::filesystem::path& path);

/// One row per complete window.
void write_windows_csv(const WindowDiagnostics& diag, const std::filesystem::path& path);

/// Partition report: k,gamma_k,gamma_next,Delta,within_bounds.
void write_partition_csv(const WindowPartition& partition, const WindowLengthReport& report,
                         const std::filesystem::path& path);

/// Grids for the rate curves, e.g. "theta=0.5:0.99:0.01;gamma=0.7,0.8,0.9,0.999".
/// A range a:b:h expands to a + i h for i = 0..round((b-a)/h).
struct RateGrid {
  std::vector<double> theta;
  std::vector<double> gamma;
};
RateGrid parse_grid_spec(const std::string& spec);

inline constexpr const char* kDefaultGridSpec = "theta=0.5:0.99:0.01;gamma=0.7,0.8,0.9,0.999";

/// Writes rate_curves_gamma.csv (gamma,theta,Psi,Phi,theta_c,is_transition) with
/// the transition point of each gamma inserted into the theta grid, and
/// rate_curves_optimal.csv (theta,gamma_star,Psi_star,Phi_star,tadic_gamma,tadic_rate).
std::vector<std::filesystem::path> write_rate_curves(const RateGrid& grid,
                                                     const std::filesystem::path& dir);

/// Directory the harness writes under: $SGDM_OUTPUT_ROOT (default ".") / sub.
std::filesystem::path output_root(const std::string& sub);

/// summary.json, steps_seed<i>.csv and windows_seed<i>.csv for kept traces.
std::vector<std::filesystem::path> emit_outputs(const ExperimentResult& result,
                                                const std::filesystem::path& dir);

/// Shortest round-trip decimal form ("nan" for NaN).
std::string format_double(double v);

}  // namespace sgdm
