#include "sgdm/schedule.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sgdm/errors.hpp"
#include "sgdm/format.hpp"

namespace sgdm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

StepSchedule StepSchedule::polynomial(double alpha, double beta, double gamma) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("polynomial schedule: alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw InvalidArgument("polynomial schedule: beta must be non-negative");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InvalidArgument("polynomial schedule: gamma must lie in (0, 1]");
  return StepSchedule(PolynomialSchedule{alpha, beta, gamma});
}

StepSchedule StepSchedule::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw InvalidArgument("constant schedule: value must be positive");
  return StepSchedule(ConstantSchedule{c});
}

StepSchedule StepSchedule::explicit_list(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("explicit schedule: empty list");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw InvalidArgument("explicit schedule: entry " + std::to_string(i + 1) +
                            " is not positive");
    if (i > 0 && values[i] > values[i - 1])
      throw InvalidArgument("explicit schedule: entry " + std::to_string(i + 1) +
                            " increases the sequence");
  }
  return StepSchedule(ExplicitSchedule{std::move(values)});
}

std::size_t StepSchedule::length() const noexcept {
  if (const auto* e = std::get_if<ExplicitSchedule>(&v_)) return e->values.size();
  return 0;
}

double StepSchedule::operator()(std::size_t k) const {
  if (k == 0) throw InvalidArgument("step index must be >= 1");
  return std::visit(
      overloaded{
          [k](const PolynomialSchedule& p) {
            const double base = static_cast<double>(k) + p.beta;
            return p.gamma == 1.0 ? p.alpha / base : p.alpha / std::pow(base, p.gamma);
          },
          [](const ConstantSchedule& c) { return c.value; },
          [k](const ExplicitSchedule& e) {
            if (k > e.values.size())
              throw ScheduleExhausted("explicit schedule has " + std::to_string(e.values.size()) +
                                      " entries; requested k=" + std::to_string(k));
            return e.values[k - 1];
          },
      },
      v_);
}

std::string StepSchedule::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const PolynomialSchedule& p) {
                   os << "polynomial(alpha=" << shortest(p.alpha) << ",beta=" << shortest(p.beta)
                      << ",gamma=" << shortest(p.gamma) << ")";
                 },
                 [&](const ConstantSchedule& c) { os << "constant(" << shortest(c.value) << ")"; },
                 [&](const ExplicitSchedule& e) { os << "explicit(n=" << e.values.size() << ")"; },
             },
             v_);
  return os.str();
}

double step_size(const StepSchedule& schedule, std::size_t k) { return schedule(k); }

double partial_sum_delta(const StepSchedule& schedule, std::size_t m, std::size_t n) {
  if (m > n)
    throw InvalidRange("partial_sum_delta: m=" + std::to_string(m) + " exceeds n=" +
                       std::to_string(n));
  if (m == 0) throw InvalidRange("partial_sum_delta: indices start at 1");
  double s = 0.0;
  for (std::size_t i = m; i < n; ++i) s += schedule(i);
  return s;
}

double cumulative_delta(const StepSchedule& schedule, std::size_t k) {
  return partial_sum_delta(schedule, 1, k + 1);
}

double loja_r_cap(double gamma) {
  if (gamma >= 1.0) return std::numeric_limits<double>::infinity();
  return (2.0 * gamma - 1.0) / (2.0 * (1.0 - gamma));
}

namespace {

// The series sits on the boundary at r = cap (harmonic tail); the cap itself
// carries rounding, e.g. 0.8 / 0.2 for gamma = 0.9, so compare with slack.
bool below_r_cap(double r, double gamma) { return r < loja_r_cap(gamma) * (1.0 - 1e-12); }

ValidityReport polynomial_report(const PolynomialSchedule& p, const Regime& regime) {
  ValidityReport rep;
  auto fail = [&rep](std::string why) {
    rep.verdict = Verdict::invalid;
    rep.failed.push_back(std::move(why));
  };
  // gamma <= 1 is a type invariant, so sum alpha_k diverges for every polynomial schedule.
  std::visit(
      overloaded{
          [&](const GlobalRegime&) {
            if (!(2.0 * p.gamma > 1.0)) fail("sum alpha_k^2 divergent (requires gamma > 1/2)");
          },
          [&](const LojaRegime& l) {
            if (!(p.gamma > 2.0 / 3.0))
              fail("gamma outside (2/3, 1] required for local rates");
            if (!(l.r > 0.5)) fail("growth exponent r must exceed 1/2");
            if (p.gamma < 1.0 && !below_r_cap(l.r, p.gamma))
              fail("sum alpha_k^2 Delta_k^(2r) divergent (requires r < (2 gamma - 1)/(2 (1 - gamma)))");
          },
          [&](const RateRegime& rr) {
            std::visit(overloaded{
                           [&](const PowerGrowth& g) {
                             if (!(g.r > 0.5)) fail("growth exponent r must exceed 1/2");
                             if (p.gamma < 1.0 && !below_r_cap(g.r, p.gamma))
                               fail("sum alpha_k^2 Delta_k^(2r) divergent (requires r < (2 gamma - 1)/(2 (1 - gamma)))");
                           },
                           [&](const ExpGrowth& g) {
                             if (!(g.r > 0.0)) fail("exponential rate r must be positive");
                             if (!(g.p >= 0.0)) fail("power p must be non-negative");
                             if (p.gamma < 1.0) {
                               fail("sum alpha_k^2 g(Delta_k)^2 divergent: exponential growth needs gamma = 1");
                             } else if (!(2.0 * g.r * p.alpha < 1.0)) {
                               fail("sum alpha_k^2 g(Delta_k)^2 divergent (requires r < 1/(2 alpha))");
                             }
                           },
                       },
                       rr.g);
          },
      },
      regime);
  return rep;
}

}  // namespace

ValidityReport validate_schedule(const StepSchedule& schedule, const Regime& regime) {
  return std::visit(
      overloaded{
          [&](const PolynomialSchedule& p) { return polynomial_report(p, regime); },
          [](const ConstantSchedule&) {
            return ValidityReport{Verdict::invalid, {"sum alpha_k^2 divergent for a constant step"}};
          },
          [](const ExplicitSchedule&) {
            return ValidityReport{Verdict::indeterminate,
                                  {"finite explicit list: asymptotic conditions undecidable"}};
          },
      },
      schedule.variant());
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::invalid: return "invalid";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

}  // namespace sgdm
