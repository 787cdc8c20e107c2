#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sgdm {

/// A decay exponent that may be unbounded (e.g. 1/(2 theta - 1) at theta = 1/2).
/// min() over Exponents is total and never produces a floating-point infinity.
class Exponent {
 public:
  static Exponent finite(double v) { return Exponent(v, false); }
  static Exponent unbounded() { return Exponent(0.0, true); }

  bool is_unbounded() const noexcept { return unbounded_; }
  /// Throws when unbounded.
  double value() const;

  friend Exponent min(Exponent a, Exponent b) {
    if (a.unbounded_) return b;
    if (b.unbounded_) return a;
    return a.value_ <= b.value_ ? a : b;
  }

 private:
  Exponent(double v, bool u) : value_(v), unbounded_(u) {}
  double value_;
  bool unbounded_;
};

/// c / (2 theta - 1), unbounded at theta = 1/2.
Exponent over_two_theta_minus_one(double c, double theta);

/// Rates in terms of Delta_k under g(x) = x^r:
/// psi = min{2r, 1/(2 theta - 1)}, phi = min{r - 1/2, (1 - theta)/(2 theta - 1)}.
struct PsiPhi {
  double psi = 0.0;
  double phi = 0.0;
};
PsiPhi rate_psi_phi(double theta, double r);

/// Rates in k for alpha_k = alpha/(k + beta)^gamma, gamma in (2/3, 1):
/// Psi = min{2 gamma - 1, (1 - gamma)/(2 theta - 1)},
/// Phi = min{3/2 gamma - 1, (1 - gamma)(1 - theta)/(2 theta - 1)}.
/// theta_c = gamma/(4 gamma - 2) is where the two Psi branches meet.
struct PhiPsi {
  double Phi = 0.0;
  double Psi = 0.0;
  double theta_c = 0.0;
  bool Psi_on_step_branch = true;  // Psi attained by 2 gamma - 1
};
PhiPsi rate_Phi_Psi(double gamma, double theta);

/// Best polynomial decay for a known theta, and the comparison rate for SGD iterates.
struct OptimalGamma {
  double gamma_star = 1.0;   // 2 theta / (4 theta - 1)
  double Psi_at_star = 1.0;  // 1 / (4 theta - 1)
  double Phi_at_star = 0.0;  // (1 - theta) / (4 theta - 1)
  double tadic_gamma = 1.0;  // (4 theta - 1) / (6 theta - 2)
  double tadic_rate = 1.0;   // 1 / (6 theta - 2)
  double tadic_iterate_rate = 0.0;  // (1 - theta) / (6 theta - 2)
};
OptimalGamma optimal_gamma(double theta);

/// Iterate exponent of the SGD comparison: min{2 gamma - 3/2, (1 - theta)(1 - gamma)/(2 theta - 1)}
/// for gamma in (3/4, 1).
double tadic_iterate_exponent(double gamma, double theta);

/// gamma = 1, theta = 1/2 case: accepted iff alpha > 200 / C^2.
struct LogRateCase {
  bool accepted = false;
  double threshold = 0.0;
  // o(log(k)^{log_power + eps} / k^{power})
  double iterate_power = 0.5;
  double iterate_log_power = 0.5;
  double value_power = 1.0;  // f-gap and ||grad f||^2
  double value_log_power = 1.0;
};
LogRateCase log_rate_case(double alpha, double C);

enum class RateRegimeKind { polynomial, log_corrected, logarithmic_only };

/// Predicted exponents (in k) for a polynomial schedule with decay gamma.
struct RatePrediction {
  double theta = 0.5;
  double gamma = 1.0;
  RateRegimeKind kind = RateRegimeKind::polynomial;
  double value_exponent = 0.0;    // f-gap and ||grad f||^2
  double iterate_exponent = 0.0;  // ||x - x*||
  bool log_factor = false;
};
/// gamma in (2/3, 1]: Phi/Psi below 1, the log-corrected case at gamma = 1 with
/// theta = 1/2, and zero polynomial exponents at gamma = 1 with theta > 1/2.
RatePrediction predict_rates(double gamma, double theta);

struct EmpiricalRate {
  double exponent = 0.0;  // -slope of log(value) vs log(k)
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
  std::size_t points = 0;
  double residual_rms = 0.0;
  std::size_t clipped = 0;  // values raised to the 1e-14 floor
};

/// Least-squares fit over the points with log k in the last tail_fraction of
/// [log k_min, log k_max]. Throws InvalidArgument when fewer than 10 points remain.
EmpiricalRate estimate_exponent(const std::vector<double>& ks, const std::vector<double>& values,
                                double tail_fraction);

/// Same fit over k >= k_lo.
EmpiricalRate estimate_exponent_from(const std::vector<double>& ks,
                                     const std::vector<double>& values, double k_lo);

double median(std::vector<double> v);

/// y_{k+1} = [1 - q (k+beta)^{-s}] y_k + p (k+beta)^{-t}, y_1 = 1.
struct ChungParams {
  double q = 1.0;
  double p = 1.0;
  double s = 1.0;
  double t = 1.5;
  double beta = 0.0;
};

struct ChungResult {
  bool passed = false;
  char regime = 'a';     // 'a': s = 1, 'b': s < 1
  double constant = 0.0; // p/(q+1-t) or p/q
  double rate = 0.0;     // bound decays like (k+beta)^{-rate}
  double worst_ratio = 0.0;  // max over the tail of y_k / bound_k (or y_k (k+beta)^q when p = 0)
  std::size_t tail_start = 0;
};

/// Simulates the recursion with equality and compares with the asymptotic bound
/// on k in [horizon/100, horizon]. p = 0 is accepted for s = 1 only and checks
/// that y_k (k+beta)^q stays bounded by its value at the tail start.
ChungResult chung_bound_check(const ChungParams& params, std::size_t horizon,
                              double tolerance = 0.05);

}  // namespace sgdm
