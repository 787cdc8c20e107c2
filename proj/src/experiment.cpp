#include "sgdm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "sgdm/errors.hpp"

namespace sgdm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

DecadeProfile decade_profile(const Trajectory& tr, const std::optional<WindowDiagnostics>& diag,
                             double lambda) {
  DecadeProfile dp;
  const std::size_t H = tr.spec.horizon;
  const double c = lambda / (1.0 - lambda);
  for (std::size_t hi = H; hi >= 10; hi /= 10) {
    const std::size_t lo = hi / 10;
    std::vector<double> g, xz, d;
    for (const auto& s : tr.steps) {
      if (s.k <= lo || s.k > hi) continue;
      g.push_back(s.grad_norm);
      xz.push_back(c * s.move);
    }
    if (diag)
      for (const auto& r : diag->rows)
        if (r.gamma_k > lo && r.gamma_k <= hi) d.push_back(r.d);
    dp.upper.push_back(hi);
    dp.grad_norm.push_back(median(g));
    dp.xz_gap.push_back(median(xz));
    dp.spread.push_back(median(d));
  }
  return dp;
}

std::optional<EmpiricalRate> fit(const std::vector<double>& ks, const std::vector<double>& v,
                                 double k_lo) {
  try {
    return estimate_exponent_from(ks, v, k_lo);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

struct Shared {
  const ExperimentConfig& cfg;
  Problem problem;
  std::shared_ptr<const WindowPartition> partition;
  bool keep_diag_rows = false;
};

SeedResult run_seed(const Shared& sh, std::size_t index, std::uint64_t seed, bool keep,
                    std::optional<KeptTrajectory>& kept) {
  const ExperimentConfig& cfg = sh.cfg;
  RunSpec spec{sh.problem, cfg.params, cfg.schedule, cfg.noise, seed, cfg.horizon, cfg.x0};
  RecordingPolicy pol;
  pol.stride = cfg.stride;
  pol.partition = sh.partition;
  pol.divergence_cap = cfg.divergence_cap;
  Trajectory tr = run_trajectory(std::move(spec), pol);

  SeedResult res;
  res.index = index;
  res.seed = seed;
  res.diverged = tr.diverged;
  res.divergence_reason = tr.divergence_reason;
  res.last_index = tr.last_index;
  res.region_exits = tr.region_exits;

  const Problem& pb = sh.problem;
  if (!tr.steps.empty()) {
    const StepRecord& last = tr.steps.back();
    if (pb.f_star) res.final_f_gap = std::max(last.f - *pb.f_star, 0.0);
    res.final_grad_norm = last.grad_norm;
    res.final_dist = last.dist;
  }

  if (!tr.diverged) {
    std::vector<double> ks, fg, g2, dd;
    const double k_lo = cfg.fit_from * static_cast<double>(cfg.horizon);
    for (const auto& s : tr.steps) {
      if (static_cast<double>(s.k) < k_lo) continue;
      ks.push_back(static_cast<double>(s.k));
      if (pb.f_star) fg.push_back(std::max(s.f - *pb.f_star, 0.0));
      g2.push_back(s.grad_norm * s.grad_norm);
      if (pb.x_star) dd.push_back(s.dist);
    }
    if (pb.f_star) res.rate_f_gap = fit(ks, fg, k_lo);
    res.rate_grad_sq = fit(ks, g2, k_lo);
    if (pb.x_star) res.rate_dist = fit(ks, dd, k_lo);
  }

  std::optional<WindowDiagnostics> diag;
  if (sh.partition && (cfg.iterate_bounds || cfg.descent || cfg.stationarity)) {
    diag = diagnose_windows(tr, pb, cfg.params);
    res.windows = diag->rows.size();
    res.K_T = diag->K_T;
    if (cfg.iterate_bounds) {
      const auto ib = check_iterate_bounds(*diag);
      res.bounds_checked = ib.checked;
      res.bounds_violations = ib.violations;
      res.bounds_violations_before = ib.violations_before;
    }
    if (cfg.descent) {
      const auto dl = check_descent(*diag);
      res.descent_checked = dl.checked;
      res.descent_violations = dl.violations;
      res.descent_violations_before = dl.violations_before;
      res.ledger_increases = dl.ledger_increases;
    }
  }
  if (cfg.cauchy || cfg.step_lower_bound) {
    const CauchyProfile cp = cauchy_profile(tr, cfg.step_lower_bound);
    res.step_lower_bound = cp.step_lower_bound;
    if (!cp.boundary_partial_sums.empty()) res.boundary_path_length = cp.boundary_partial_sums.back();
  }
  res.decades = decade_profile(tr, diag, cfg.params.lambda());

  if (keep) kept = KeptTrajectory{index, std::move(tr), std::move(diag)};
  return res;
}

std::optional<double> median_of(const std::vector<SeedResult>& seeds,
                                std::optional<EmpiricalRate> SeedResult::*field) {
  std::vector<double> v;
  for (const auto& s : seeds)
    if (!s.diverged && (s.*field)) v.push_back((s.*field)->exponent);
  if (v.empty()) return std::nullopt;
  return median(std::move(v));
}

DecadeProfile median_profile(const std::vector<SeedResult>& seeds) {
  DecadeProfile out;
  const SeedResult* ref = nullptr;
  for (const auto& s : seeds)
    if (!s.diverged) {
      ref = &s;
      break;
    }
  if (!ref) return out;
  out.upper = ref->decades.upper;
  const std::size_t n = out.upper.size();
  auto column = [&](std::vector<double> DecadeProfile::*f) {
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> v;
      for (const auto& s : seeds) {
        if (s.diverged || (s.decades.*f).size() != n) continue;
        const double x = (s.decades.*f)[j];
        if (!std::isnan(x)) v.push_back(x);
      }
      col[j] = v.empty() ? kNaN : median(std::move(v));
    }
    return col;
  };
  out.grad_norm = column(&DecadeProfile::grad_norm);
  out.xz_gap = column(&DecadeProfile::xz_gap);
  out.spread = column(&DecadeProfile::spread);
  return out;
}

void add(RunSummary& s, std::string name, bool ok, std::string detail) {
  s.criteria.push_back({std::move(name), ok, std::move(detail)});
}

void evaluate(const ExperimentConfig& cfg, RunSummary& s) {
  std::size_t ok_seeds = s.seeds.size() - s.divergent;

  if (s.window_lengths) {
    const auto& w = *s.window_lengths;
    add(s, "window_lengths", w.violations == 0,
        std::to_string(w.violations) + " violations past K_delta=" +
            (w.k_delta_certified ? std::to_string(*w.k_delta_certified) : std::string("none")) +
            " of " + std::to_string(w.windows) + " windows");
  }

  if (s.window_lengths && (cfg.iterate_bounds || cfg.descent)) {
    std::size_t checked = 0, viol = 0, inc = 0, before = 0, unreached = 0;
    for (const auto& r : s.seeds) {
      if (r.diverged) continue;
      checked += cfg.descent ? r.descent_checked : r.bounds_checked;
      viol += r.bounds_violations + r.descent_violations;
      before += r.bounds_violations_before + r.descent_violations_before;
      inc += r.ledger_increases;
      if (!r.K_T || *r.K_T > r.windows) ++unreached;
    }
    std::string detail = std::to_string(viol) + " violations and " + std::to_string(inc) +
                         " ledger increases over " + std::to_string(checked) +
                         " windows past K_T (" + std::to_string(before) + " before K_T, not asserted)";
    if (unreached) detail += "; K_T not reached in " + std::to_string(unreached) + " seeds";
    add(s, "window_inequalities", viol == 0 && inc == 0, detail);
  }

  if (cfg.stationarity) {
    const auto& d = s.median_decades;
    bool ok = ok_seeds > 0 && !d.grad_norm.empty() && d.grad_norm.front() < cfg.grad_threshold;
    const bool g_dec = decreasing_decades(d.grad_norm);
    const bool x_dec = decreasing_decades(d.xz_gap);
    const bool s_dec = decreasing_decades(d.spread);
    ok = ok && g_dec && x_dec && s_dec;
    add(s, "stationarity", ok,
        "final-decade median grad " + (d.grad_norm.empty() ? std::string("n/a") : fmt(d.grad_norm.front())) +
            " (threshold " + fmt(cfg.grad_threshold) + "); decreasing grad=" + (g_dec ? "yes" : "no") +
            " xz=" + (x_dec ? "yes" : "no") + " d=" + (s_dec ? "yes" : "no"));
  }

  auto rate = [&](const char* name, const std::optional<double>& tol, const std::optional<double>& med,
                  double predicted) {
    if (!tol) return;
    const bool ok = med && *med >= predicted - *tol;
    add(s, name, ok,
        "median exponent " + (med ? fmt(*med) : std::string("n/a")) + " vs predicted " + fmt(predicted) +
            " - " + fmt(*tol));
  };
  if (s.prediction) {
    rate("rate_f_gap", cfg.f_gap_tolerance, s.median_rate_f_gap, s.prediction->value_exponent);
    rate("rate_grad_sq", cfg.grad_sq_tolerance, s.median_rate_grad_sq, s.prediction->value_exponent);
    rate("rate_dist", cfg.dist_tolerance, s.median_rate_dist, s.prediction->iterate_exponent);
  }

  if (cfg.final_f_gap_max) {
    const bool ok = s.median_final_f_gap && *s.median_final_f_gap <= *cfg.final_f_gap_max;
    add(s, "final_f_gap", ok,
        "median final gap " + (s.median_final_f_gap ? fmt(*s.median_final_f_gap) : std::string("n/a")) +
            " (max " + fmt(*cfg.final_f_gap_max) + ")");
  }

  if (cfg.step_lower_bound) {
    std::size_t checked = 0, sat = 0;
    double min_len = std::numeric_limits<double>::infinity();
    for (const auto& r : s.seeds) {
      if (!r.step_lower_bound) continue;
      checked += r.step_lower_bound->checked;
      sat += r.step_lower_bound->satisfied;
      min_len = std::min(min_len, r.step_lower_bound->total_length);
    }
    bool ok = checked > 0 && sat == checked;
    std::string detail = std::to_string(sat) + "/" + std::to_string(checked) + " steps with move >= alpha_k";
    if (cfg.min_total_length) {
      ok = ok && min_len >= *cfg.min_total_length;
      detail += "; min path length " + fmt(min_len) + " (needs " + fmt(*cfg.min_total_length) + ")";
    }
    add(s, "step_lower_bound", ok, detail);
  }
}

}  // namespace

bool RunSummary::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.passed; });
}

bool decreasing_decades(const std::vector<double>& newest_first) {
  double newer = kNaN;
  for (const double v : newest_first) {
    if (std::isnan(v)) continue;
    if (!std::isnan(newer) && !(newer < v) && !(newer == 0.0 && v == 0.0)) return false;
    newer = v;
  }
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed_offset) {
  Shared sh{cfg, make_problem(cfg.problem_name, cfg.dim, cfg.problem_params), nullptr};
  const Problem& pb = sh.problem;

  ExperimentResult out;
  RunSummary& s = out.summary;
  s.canonical_config = cfg.canonical;
  s.config_hash = fnv1a_hex(cfg.canonical);
  s.problem = pb.name + (pb.parameters.empty() ? "" : "(" + pb.parameters + ")");
  s.schedule = cfg.schedule.describe();
  s.noise = cfg.noise.describe();
  s.lambda = cfg.params.lambda();
  s.nu = cfg.params.nu();
  s.L = pb.L;
  s.theta = pb.loja.theta;
  s.horizon = cfg.horizon;

  if (cfg.windows_enabled) {
    const double T_default = default_window(pb.L, cfg.params);
    const double T = cfg.T.value_or(T_default);
    if ((cfg.iterate_bounds || cfg.descent) && T > T_default * (1.0 + 1e-12))
      throw ConfigError({"windows.T: " + fmt(T) + " exceeds the largest window " + fmt(T_default) +
                         " for which the window inequalities are claimed"});
    sh.partition = std::make_shared<const WindowPartition>(build_partition(cfg.schedule, T, cfg.horizon));
    const auto rep = verify_window_lengths(*sh.partition, cfg.schedule, cfg.delta);
    s.window_lengths = WindowLengthSummary{T, cfg.delta, sh.partition->windows(), rep.k_delta,
                                           rep.k_delta_certified, rep.violations.size()};
  }

  if (cfg.regime == TargetRegime::loja && cfg.schedule.is_polynomial()) {
    const auto& poly = std::get<PolynomialSchedule>(cfg.schedule.variant());
    s.prediction = predict_rates(poly.gamma, pb.loja.theta);
  }

  const std::size_t n = cfg.seeds;
  s.seeds.resize(n);
  std::vector<std::optional<KeptTrajectory>> kept(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      const bool keep = cfg.traces == TraceMode::all || (cfg.traces == TraceMode::first && i == 0);
      try {
        s.seeds[i] = run_seed(sh, i, cfg.base_seed + seed_offset + i, keep, kept[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> gaps;
  for (const auto& r : s.seeds) {
    if (r.diverged) {
      ++s.divergent;
      continue;
    }
    if (!std::isnan(r.final_f_gap)) gaps.push_back(r.final_f_gap);
  }
  if (!gaps.empty()) s.median_final_f_gap = median(gaps);
  s.median_rate_f_gap = median_of(s.seeds, &SeedResult::rate_f_gap);
  s.median_rate_grad_sq = median_of(s.seeds, &SeedResult::rate_grad_sq);
  s.median_rate_dist = median_of(s.seeds, &SeedResult::rate_dist);
  s.median_decades = median_profile(s.seeds);

  evaluate(cfg, s);

  for (auto& k : kept)
    if (k) out.traces.push_back(std::move(*k));
  return out;
}

}  // namespace sgdm
