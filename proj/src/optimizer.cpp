#include "sgdm/optimizer.hpp"

#include <cmath>

#include "sgdm/errors.hpp"

namespace sgdm {

MomentumParams::MomentumParams(double lambda, double nu) : lambda_(lambda), nu_(nu) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw InvalidArgument("momentum: lambda must lie in [0, 1)");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("momentum: nu must be >= 0");
}

std::pair<IterateState, StepDetail> sgdm_step(const IterateState& state, const MomentumParams& params,
                                              double alpha_k, const Problem& problem,
                                              const NoiseModel& noise, const NoiseStream& stream) {
  if (!(alpha_k > 0.0)) throw InvalidArgument("sgdm_step: alpha_k must be positive");
  const std::size_t d = problem.dim;
  if (state.x_curr.size() != d || state.x_prev.size() != d)
    throw DimensionMismatch("sgdm_step: state dimension does not match the problem");

  StepDetail det;
  det.k = state.k;
  det.alpha = alpha_k;
  det.x_tilde.resize(d);
  det.grad_tilde.resize(d);
  det.g.resize(d);
  for (std::size_t i = 0; i < d; ++i)
    det.x_tilde[i] = state.x_curr[i] + params.nu() * (state.x_curr[i] - state.x_prev[i]);
  const double f_tilde = problem.eval(det.x_tilde, det.grad_tilde);
  det.noise = sample_noise(noise, stream, state.k, d);

  IterateState next;
  next.k = state.k + 1;
  next.x_prev = state.x_curr;
  next.x_curr.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    det.g[i] = det.grad_tilde[i] - det.noise[i];
    next.x_curr[i] = state.x_curr[i] - alpha_k * det.g[i] +
                     params.lambda() * (state.x_curr[i] - state.x_prev[i]);
  }
  if (!std::isfinite(f_tilde) || !all_finite(det.grad_tilde) || !all_finite(next.x_curr))
    throw Divergence("non-finite value at step k=" + std::to_string(state.k));
  return {std::move(next), std::move(det)};
}

void auxiliary_z(ConstView x_curr, ConstView x_prev, double lambda, MutView out) {
  const double inv = 1.0 / (1.0 - lambda);
  for (std::size_t i = 0; i < x_curr.size(); ++i)
    out[i] = inv * x_curr[i] - lambda * inv * x_prev[i];
}

Vector auxiliary_z(const IterateState& state, double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("auxiliary_z: lambda must lie in [0, 1)");
  Vector z(state.x_curr.size());
  auxiliary_z(state.x_curr, state.x_prev, lambda, z);
  return z;
}

double merit_zeta(double L, const MomentumParams& params) {
  return 3.0 * L / (1.0 - params.lambda());
}

double merit_value(const Problem& problem, const MomentumParams& params, ConstView x, ConstView z) {
  return problem.value(z) + merit_zeta(problem.L, params) * dist_sq(z, x);
}

MeritGradient merit_gradient(const Problem& problem, const MomentumParams& params, ConstView x,
                             ConstView z) {
  const double zeta = merit_zeta(problem.L, params);
  MeritGradient mg;
  mg.dx.resize(problem.dim);
  mg.dz.resize(problem.dim);
  problem.eval(z, mg.dz);
  for (std::size_t i = 0; i < problem.dim; ++i) {
    mg.dx[i] = 2.0 * zeta * (x[i] - z[i]);
    mg.dz[i] += 2.0 * zeta * (z[i] - x[i]);
  }
  return mg;
}

}  // namespace sgdm
