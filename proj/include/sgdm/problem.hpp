#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "sgdm/vector_ops.hpp"

namespace sgdm {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Ball (l2) or box (linf) around a center; an infinite radius means all of R^d.
struct Region {
  enum class Norm { l2, linf };

  Vector center;
  double radius = kUnbounded;
  Norm norm = Norm::l2;

  bool bounded() const noexcept { return std::isfinite(radius); }
  bool contains(ConstView x) const noexcept;
};

/// Lojasiewicz data at the designated critical point:
/// ||grad f(x)|| >= C_f |f(x) - f_star|^theta on region with 0 < |f - f_star| < eta.
struct LojaData {
  double theta = 0.5;
  double C_f = 1.0;
  double eta = kUnbounded;
  Region region;
};

class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(ConstView x) const = 0;
  /// Returns f(x) and writes grad f(x) into grad.
  virtual double value_and_gradient(ConstView x, MutView grad) const = 0;
};

/// Objective plus the constants the analysis needs. L is the Lipschitz
/// constant of grad f on smooth_region (global when the region is unbounded).
struct Problem {
  std::string name;
  std::size_t dim = 0;
  double L = 1.0;
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  LojaData loja;
  double lower_bound = -kUnbounded;
  Region smooth_region;
  std::string parameters;  // canonical "key=value,..." echo of the construction parameters
  std::shared_ptr<const Objective> objective;

  double value(ConstView x) const;
  double eval(ConstView x, MutView grad) const;
};

/// Named numeric parameters plus an optional explicit spectrum (quadratic).
struct ProblemParams {
  std::map<std::string, double> values;
  Vector spectrum;
};

/// Registry:
///   quadratic        f = 1/2 sum_i s_i x_i^2; spectrum, or eigenvalues spaced in [mu, lq]
///   even_power       f = ||x||^{2p}, p >= 1; L declared on the ball of `radius` (default sqrt(d))
///   sin_toy          f = sin(x_1), d = 2
///   rosenbrock       f = (a - x)^2 + b (y - x^2)^2, d = 2; L declared on the box [-box, box]^2
///   shifted_quartic  f = (x - a)^4, d = 1; L declared on |x - a| <= radius
Problem make_problem(const std::string& name, std::size_t dim, const ProblemParams& params = {});

struct Evaluation {
  double f = 0.0;
  Vector grad;
};

Evaluation problem_eval(const Problem& problem, ConstView x);

/// Worst |fd_i - g_i| / max(|g_i|, 1) over coordinates, central differences with step h.
double fd_gradient_check(const Problem& problem, ConstView x, double h);

/// ||grad f(x)|| - C_f |f(x) - f_star|^theta, or nullopt outside the declared region.
std::optional<double> loja_residual(const Problem& problem, ConstView x);

}  // namespace sgdm
