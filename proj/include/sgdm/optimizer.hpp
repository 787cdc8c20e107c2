#pragma once

#include <cstddef>
#include <string>

#include "sgdm/noise.hpp"
#include "sgdm/problem.hpp"
#include "sgdm/vector_ops.hpp"

namespace sgdm {

/// Momentum weight lambda in [0, 1) and extrapolation weight nu >= 0.
class MomentumParams {
 public:
  MomentumParams() = default;
  MomentumParams(double lambda, double nu);

  static MomentumParams sgd() { return {0.0, 0.0}; }
  static MomentumParams heavy_ball(double lambda) { return {lambda, 0.0}; }
  static MomentumParams nesterov(double lambda) { return {lambda, lambda}; }

  double lambda() const noexcept { return lambda_; }
  double nu() const noexcept { return nu_; }

 private:
  double lambda_ = 0.0;
  double nu_ = 0.0;
};

/// (x^{k-1}, x^k) at step counter k >= 1. The initial state has x_prev == x_curr.
struct IterateState {
  std::size_t k = 1;
  Vector x_prev;
  Vector x_curr;

  static IterateState initial(Vector x0) { return {1, x0, std::move(x0)}; }
};

/// Everything evaluated while producing x^{k+1} from x^k.
struct StepDetail {
  std::size_t k = 0;
  double alpha = 0.0;
  Vector x_tilde;  // extrapolated point where the gradient is taken
  Vector grad_tilde;
  Vector noise;  // e^k
  Vector g;      // grad f(x_tilde) - e^k
};

/// One SGDM iteration:
///   x_tilde = x + nu (x - x_prev)
///   g       = grad f(x_tilde) - e^k
///   x_next  = x - alpha g + lambda (x - x_prev)
/// Throws Divergence when a non-finite value appears.
std::pair<IterateState, StepDetail> sgdm_step(const IterateState& state, const MomentumParams& params,
                                              double alpha_k, const Problem& problem,
                                              const NoiseModel& noise, const NoiseStream& stream);

/// z^k = (x^k - lambda x^{k-1}) / (1 - lambda).
Vector auxiliary_z(const IterateState& state, double lambda);
void auxiliary_z(ConstView x_curr, ConstView x_prev, double lambda, MutView out);

/// zeta = 3 L / (1 - lambda).
double merit_zeta(double L, const MomentumParams& params);

/// M(x, z) = f(z) + zeta ||z - x||^2.
double merit_value(const Problem& problem, const MomentumParams& params, ConstView x, ConstView z);

struct MeritGradient {
  Vector dx;  // 2 zeta (x - z)
  Vector dz;  // grad f(z) + 2 zeta (z - x)

  double norm_sq() const { return sgdm::norm_sq(dx) + sgdm::norm_sq(dz); }
};

MeritGradient merit_gradient(const Problem& problem, const MomentumParams& params, ConstView x,
                             ConstView z);

}  // namespace sgdm
