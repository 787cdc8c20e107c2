#include "sgdm/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sgdm/errors.hpp"

namespace sgdm {

namespace {

/// Complete windows of `partition` whose closing index the trajectory reached.
std::size_t reached_windows(const Trajectory& tr, const WindowPartition& part) {
  std::size_t w = 0;
  while (w < part.windows() && part.gamma[w + 1] <= tr.last_index) ++w;
  return w;
}

bool same_partition(const Trajectory& tr, const WindowPartition& part) {
  if (!tr.partition) return false;
  if (tr.partition.get() == &part) return true;
  return tr.partition->T == part.T && tr.partition->gamma == part.gamma;
}

}  // namespace

std::vector<double> aggregate_errors(const Trajectory& tr, const WindowPartition& part) {
  const bool logged = !tr.noises.empty() || tr.last_index == 1;
  if (!logged && !tr.noise_replayable)
    throw InsufficientRecording("aggregate_errors: trajectory has no noise log or replayable stream");
  const std::size_t W = reached_windows(tr, part);
  const std::size_t d = tr.spec.problem.dim;
  const NoiseStream stream = tr.noise_stream();
  std::vector<double> s(W, 0.0);
  Vector sum(d), e(d);
  for (std::size_t w = 0; w < W; ++w) {
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t i = part.gamma[w]; i < part.gamma[w + 1]; ++i) {
      if (!tr.noises.empty())
        e = tr.noises[i - 1];
      else
        sample_noise(tr.spec.noise, stream, i, e);
      const double a = tr.spec.schedule(i);
      for (std::size_t j = 0; j < d; ++j) sum[j] += a * e[j];
      s[w] = std::max(s[w], norm(sum));
    }
  }
  return s;
}

std::vector<double> iterate_spread(const Trajectory& tr, const WindowPartition& part, double lambda) {
  if (same_partition(tr, part) && tr.spec.params.lambda() == lambda) {
    std::vector<double> d;
    d.reserve(tr.windows.size());
    for (const auto& w : tr.windows) d.push_back(std::max(w.max_dx, w.max_dz));
    return d;
  }
  if (tr.iterates.empty())
    throw InsufficientRecording("iterate_spread: run tracked neither this partition nor full iterates");
  const std::size_t W = reached_windows(tr, part);
  const std::size_t dim = tr.spec.problem.dim;
  std::vector<double> out(W, 0.0);
  Vector za(dim), z(dim);
  auto prev_of = [&](std::size_t t) -> const Vector& { return tr.iterates[t >= 2 ? t - 2 : 0]; };
  for (std::size_t w = 0; w < W; ++w) {
    const std::size_t a = part.gamma[w];
    const Vector& xa = tr.iterates[a - 1];
    auxiliary_z(xa, prev_of(a), lambda, za);
    for (std::size_t t = a + 1; t <= part.gamma[w + 1]; ++t) {
      const Vector& xt = tr.iterates[t - 1];
      auxiliary_z(xt, prev_of(t), lambda, z);
      out[w] = std::max({out[w], dist(xt, xa), dist(z, za)});
    }
  }
  return out;
}

std::optional<std::size_t> applicability_index(const WindowPartition& part,
                                               const StepSchedule& schedule, double L,
                                               const MomentumParams& params) {
  const double lam = params.lambda();
  const double nu = params.nu();
  const double iota = std::min(0.1, nu * (1.0 - lam) / (1.0 + 2.0 * nu)) / 10.0;
  const double step_cap = (1.0 - 0.99) * part.T;
  for (std::size_t w = 0; w < part.windows(); ++w) {
    const double a = schedule(part.gamma[w]);
    if (a <= step_cap && L * nu * a <= lam * iota && L * nu * nu * a <= lam * lam / 80.0)
      return w + 1;
  }
  return std::nullopt;
}

double residual_tolerance(double merit) { return 1e-8 * (1.0 + std::abs(merit)); }

WindowDiagnostics diagnose_windows(const Trajectory& tr, const Problem& pb,
                                   const MomentumParams& params) {
  if (!tr.partition)
    throw InsufficientRecording("diagnose_windows: trajectory was not recorded with a partition");
  const WindowPartition& part = *tr.partition;
  const std::size_t W = tr.windows.size();
  const std::size_t d = pb.dim;
  const double lam = params.lambda();
  const double om = 1.0 - lam;
  const double T = part.T;
  const double L = pb.L;

  WindowDiagnostics out;
  out.T = T;
  out.K_T = applicability_index(part, tr.spec.schedule, L, params);
  out.rows.resize(W);

  Vector z(d), z_next(d), gz(d);
  std::vector<double> merit(W + 1), gap_sq(W + 1), gradz_sq(W + 1), gradM(W + 1);
  for (std::size_t w = 0; w <= W; ++w) {
    const auto& b = tr.boundaries[w];
    auxiliary_z(b.x, b.x_prev, lam, z);
    const auto mg = merit_gradient(pb, params, b.x, z);
    gap_sq[w] = dist_sq(z, b.x);
    merit[w] = pb.value(z) + merit_zeta(L, params) * gap_sq[w];
    // grad f(z) = dz + dx
    double g2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double gi = mg.dz[i] + mg.dx[i];
      g2 += gi * gi;
    }
    gradz_sq[w] = g2;
    gradM[w] = std::sqrt(mg.norm_sq());
  }

  double tail = 0.0;
  for (std::size_t w = W; w-- > 0;) {
    tail += tr.windows[w].s * tr.windows[w].s;
    out.rows[w].u = 8.0 / (om * T) * tail;
  }

  for (std::size_t w = 0; w < W; ++w) {
    WindowRow& r = out.rows[w];
    const WindowStream& ws = tr.windows[w];
    r.k = w + 1;
    r.gamma_k = part.gamma[w];
    r.gamma_next = part.gamma[w + 1];
    r.delta = part.delta[w];
    r.s = ws.s;
    r.d = std::max(ws.max_dx, ws.max_dz);
    r.merit = merit[w];
    r.grad_merit_norm = gradM[w];
    r.xz_gap = std::sqrt(gap_sq[w]);
    const double s2 = r.s * r.s;
    const double tg = T * T * gradz_sq[w];
    r.res_bound_spread = 1.5 * gap_sq[w] + 15.0 * (tg + s2) / (om * om) - r.d * r.d;
    r.res_bound_gap = 0.5 * (1.0 + lam) * gap_sq[w] + 8.0 * (tg + 4.0 * s2) / (om * om * om) -
                      gap_sq[w + 1];
    r.res_descent = merit[w] + 8.0 * s2 / (om * T) - merit[w + 1] - L / 12.0 * r.d * r.d -
                    T * gradM[w] * gradM[w] / (100.0 * om);
    r.applicable = out.K_T && r.k >= *out.K_T;
  }
  out.merit_last = merit[W];
  return out;
}

namespace {

void require_cap(double T, double cap, const char* what) {
  if (T > cap * (1.0 + 1e-12))
    throw InapplicableWindow(std::string(what) + ": window T=" + std::to_string(T) +
                             " exceeds cap " + std::to_string(cap));
}

}  // namespace

IterateBoundsReport check_iterate_bounds(const WindowDiagnostics& diag) {
  IterateBoundsReport rep;
  rep.K_T = diag.K_T;
  for (const auto& r : diag.rows) {
    rep.res_spread.push_back(r.res_bound_spread);
    rep.res_gap.push_back(r.res_bound_gap);
    const double tol = residual_tolerance(r.merit);
    const bool bad = r.res_bound_spread < -tol || r.res_bound_gap < -tol;
    if (r.applicable) {
      ++rep.checked;
      rep.violations += bad;
    } else {
      rep.violations_before += bad;
    }
  }
  return rep;
}

IterateBoundsReport check_iterate_bounds(const Trajectory& tr, const Problem& pb,
                                         const MomentumParams& params) {
  if (!tr.partition) throw InsufficientRecording("check_iterate_bounds: no partition recorded");
  require_cap(tr.partition->T, iterate_bound_window_cap(pb.L, params), "check_iterate_bounds");
  return check_iterate_bounds(diagnose_windows(tr, pb, params));
}

DescentLedger check_descent(const WindowDiagnostics& diag) {
  DescentLedger led;
  led.K_T = diag.K_T;
  const std::size_t W = diag.rows.size();
  for (std::size_t w = 0; w < W; ++w) {
    const auto& r = diag.rows[w];
    led.merit.push_back(r.merit);
    led.u.push_back(r.u);
    led.ledger.push_back(r.merit + r.u);
    led.residual.push_back(r.res_descent);
    const bool bad = r.res_descent < -residual_tolerance(r.merit);
    if (r.applicable) {
      ++led.checked;
      led.violations += bad;
    } else {
      led.violations_before += bad;
    }
  }
  for (std::size_t w = 0; w + 1 < W; ++w)
    if (diag.rows[w].applicable &&
        led.ledger[w + 1] > led.ledger[w] + residual_tolerance(diag.rows[w].merit))
      ++led.ledger_increases;
  return led;
}

DescentLedger check_descent(const Trajectory& tr, const Problem& pb, const MomentumParams& params) {
  if (!tr.partition) throw InsufficientRecording("check_descent: no partition recorded");
  require_cap(tr.partition->T, default_window(pb.L, params), "check_descent");
  return check_descent(diagnose_windows(tr, pb, params));
}

CauchyProfile cauchy_profile(const Trajectory& tr, bool step_lower_bound) {
  CauchyProfile prof;
  double acc = 0.0;
  for (std::size_t w = 0; w < tr.windows.size(); ++w) {
    acc += dist(tr.boundaries[w + 1].x, tr.boundaries[w].x);
    prof.boundary_partial_sums.push_back(acc);
    prof.intra_window_max.push_back(tr.windows[w].max_dx);
  }
  if (step_lower_bound) {
    if (tr.steps.size() != tr.last_index)
      throw InsufficientRecording("cauchy_profile: per-step check needs stride-1 records");
    StepLowerBound lb;
    for (std::size_t i = 1; i < tr.steps.size(); ++i) {
      const double mv = tr.steps[i].move;  // ||x^{k+1} - x^k|| with k = steps[i-1].k
      ++lb.checked;
      lb.satisfied += mv >= tr.steps[i - 1].alpha - 1e-12;
      lb.total_length += mv;
    }
    prof.step_lower_bound = lb;
  }
  return prof;
}

SummabilityProfile summability_profile(const std::vector<double>& s, const WindowPartition& part,
                                       const StepSchedule& schedule, const BetaSpec& beta) {
  if (s.size() > part.windows())
    throw InvalidArgument("summability_profile: more s_k values than windows");
  if (const auto* c = std::get_if<CustomBeta>(&beta); c && c->values.size() < s.size())
    throw InvalidArgument("summability_profile: custom beta shorter than s_k list");
  SummabilityProfile prof;
  prof.partial_sums.reserve(s.size());
  double acc = 0.0;
  double before_last_decade = 0.0;
  double cum = 0.0;  // Delta_{gamma_k}
  std::size_t cum_idx = 0;
  const std::size_t decade_start = part.horizon / 10;
  for (std::size_t w = 0; w < s.size(); ++w) {
    double b = 1.0;
    if (const auto* p = std::get_if<PowerBeta>(&beta)) {
      while (cum_idx < part.gamma[w]) cum += schedule(++cum_idx);
      b = std::pow(cum, p->r);
    } else if (const auto* c = std::get_if<CustomBeta>(&beta)) {
      b = c->values[w];
    }
    if (part.gamma[w] < decade_start) before_last_decade = acc + b * b * s[w] * s[w];
    acc += b * b * s[w] * s[w];
    prof.partial_sums.push_back(acc);
  }
  prof.last_decade_ratio = acc > 0.0 ? (acc - before_last_decade) / acc : 0.0;
  return prof;
}

}  // namespace sgdm
