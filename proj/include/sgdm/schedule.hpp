#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace sgdm {

/// alpha_k = alpha / (k + beta)^gamma.
struct PolynomialSchedule {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 1.0;
};

struct ConstantSchedule {
  double value = 0.01;
};

/// A finite, positive, non-increasing list; entry 0 is alpha_1.
struct ExplicitSchedule {
  std::vector<double> values;
};

/// Step-size sequence alpha_1, alpha_2, ... Construction validates the variant's
/// parameters; the emitted sequence is positive and non-increasing.
class StepSchedule {
 public:
  using Variant = std::variant<PolynomialSchedule, ConstantSchedule, ExplicitSchedule>;

  static StepSchedule polynomial(double alpha, double beta, double gamma);
  static StepSchedule constant(double c);
  static StepSchedule explicit_list(std::vector<double> values);

  const Variant& variant() const noexcept { return v_; }
  bool is_polynomial() const noexcept { return std::holds_alternative<PolynomialSchedule>(v_); }
  bool is_constant() const noexcept { return std::holds_alternative<ConstantSchedule>(v_); }
  bool is_explicit() const noexcept { return std::holds_alternative<ExplicitSchedule>(v_); }

  /// Largest valid k, or 0 when unbounded.
  std::size_t length() const noexcept;

  /// alpha_k for k >= 1. Throws ScheduleExhausted past an explicit list.
  double operator()(std::size_t k) const;

  std::string describe() const;

 private:
  explicit StepSchedule(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

double step_size(const StepSchedule& schedule, std::size_t k);

/// Delta_{m,n} = sum_{i=m}^{n-1} alpha_i, with Delta_{m,m} = 0.
double partial_sum_delta(const StepSchedule& schedule, std::size_t m, std::size_t n);

/// Delta_k = sum_{i=1}^{k} alpha_i.
double cumulative_delta(const StepSchedule& schedule, std::size_t k);

// ---------------------------------------------------------------------------
// Closed-form summability checks for the step-size conditions used by the
// convergence results.

/// g(x) = x^r.
struct PowerGrowth {
  double r = 1.0;
};

/// g(x) = x^p exp(r x).
struct ExpGrowth {
  double p = 0.0;
  double r = 1.0;
};

using GrowthSpec = std::variant<PowerGrowth, ExpGrowth>;

/// Sum alpha_k = inf and sum alpha_k^2 < inf.
struct GlobalRegime {};

/// Polynomial steps for local rates: gamma in (2/3, 1] and sum alpha_k^2 Delta_k^{2r} < inf.
struct LojaRegime {
  double r = 1.0;
};

/// Sum alpha_k = inf and sum alpha_k^2 g(Delta_k)^2 < inf.
struct RateRegime {
  GrowthSpec g;
};

using Regime = std::variant<GlobalRegime, LojaRegime, RateRegime>;

enum class Verdict { valid, invalid, indeterminate };

struct ValidityReport {
  Verdict verdict = Verdict::valid;
  std::vector<std::string> failed;  // one entry per failed condition

  bool ok() const noexcept { return verdict == Verdict::valid; }
};

/// Largest r for which sum alpha_k^2 Delta_k^{2r} converges under polynomial
/// decay gamma < 1, i.e. (2 gamma - 1) / (2 (1 - gamma)). Infinite at gamma = 1.
double loja_r_cap(double gamma);

ValidityReport validate_schedule(const StepSchedule& schedule, const Regime& regime);

const char* to_string(Verdict v) noexcept;

}  // namespace sgdm
