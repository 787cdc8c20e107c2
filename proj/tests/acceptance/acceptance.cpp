// One line per acceptance criterion: PASS/FAIL, wall time against its budget, detail.
// Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sgdm/config.hpp"
#include "sgdm/errors.hpp"
#include "sgdm/experiment.hpp"
#include "sgdm/output.hpp"
#include "sgdm/partition.hpp"
#include "sgdm/rates.hpp"

#ifndef SGDM_CONFIG_DIR
#error "SGDM_CONFIG_DIR must point at the configs directory"
#endif

using namespace sgdm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) { return format_double(v); }

const fs::path kConfigs = SGDM_CONFIG_DIR;

std::vector<fs::path> matrix_configs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(kConfigs / "matrix"))
    if (e.path().extension() == ".cfg") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

const CriterionResult* criterion(const RunSummary& s, const std::string& name) {
  for (const auto& c : s.criteria)
    if (c.name == name) return &c;
  return nullptr;
}

// -- 1 -----------------------------------------------------------------------

Outcome harmonic_partition() {
  const auto p = build_partition(StepSchedule::polynomial(1.0, 0.0, 1.0), 1.0, 100);
  const std::vector<std::size_t> want{1, 2, 4, 10};
  std::ostringstream os;
  os << "gamma =";
  for (std::size_t i = 0; i < 4 && i < p.gamma.size(); ++i) os << ' ' << p.gamma[i];
  const bool ok = p.gamma.size() >= 4 && std::equal(want.begin(), want.end(), p.gamma.begin());
  return {ok, os.str()};
}

// -- 2 -----------------------------------------------------------------------

std::vector<Problem> suite() {
  auto pp = [](std::map<std::string, double> v) {
    ProblemParams p;
    p.values = std::move(v);
    return p;
  };
  return {make_problem("quadratic", 1, pp({{"mu", 1}, {"lq", 1}})),
          make_problem("quadratic", 10, pp({{"mu", 1}, {"lq", 1}})),
          make_problem("quadratic", 5, pp({{"mu", 0.5}, {"lq", 3}})),
          make_problem("even_power", 1, pp({{"p", 2}})),
          make_problem("even_power", 3, pp({{"p", 1.5}})),
          make_problem("sin_toy", 2),
          make_problem("rosenbrock", 2),
          make_problem("shifted_quartic", 1, pp({{"a", 0.5}}))};
}

Outcome identities() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::size_t samples = 0, bad_update = 0, bad_z = 0, bad_expansion = 0, bad_bounds = 0;
  for (const auto& pb : suite()) {
    const std::size_t d = pb.dim;
    // inside the declared smoothness region when it is bounded, else a box of radius 2
    const double r = pb.smooth_region.bounded() ? pb.smooth_region.radius / std::sqrt(double(d)) / 2 : 2.0;
    const Vector c = pb.smooth_region.bounded() ? pb.smooth_region.center : Vector(d, 0.0);
    auto point = [&] {
      Vector v(d);
      for (std::size_t i = 0; i < d; ++i) v[i] = c[i] + r * u(rng);
      return v;
    };
    for (int n = 0; n < 10000; ++n, ++samples) {
      const double lam = 0.95 * (u(rng) + 1) / 2, nu = (u(rng) + 1) / 2;
      const double alpha = 0.05 * (u(rng) + 1) / 2 / pb.L;
      const MomentumParams mp(lam, nu);
      const IterateState st{std::size_t(n + 1), point(), point()};
      const auto [next, det] =
          sgdm_step(st, mp, alpha, pb, NoiseModel::gaussian(0.3), NoiseStream(samples));
      const double scale = 1.0 + norm(st.x_curr) + norm(st.x_prev) + alpha * norm(det.g);

      // x' - x = -alpha g + lambda (x - x_prev), with g = grad f(x~) - e
      Vector gt(d);
      Vector xt(d);
      for (std::size_t i = 0; i < d; ++i) xt[i] = st.x_curr[i] + nu * (st.x_curr[i] - st.x_prev[i]);
      pb.eval(xt, gt);
      double worst = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double g = gt[i] - det.noise[i];
        worst = std::max(worst, std::abs(next.x_curr[i] - st.x_curr[i] + alpha * g -
                                         lam * (st.x_curr[i] - st.x_prev[i])));
      }
      bad_update += worst > 1e-12 * scale;

      // z' = z - alpha/(1 - lambda) g
      const Vector z = auxiliary_z(st, lam), zn = auxiliary_z(next, lam);
      double zres = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        zres = std::max(zres, std::abs(zn[i] - z[i] + alpha / (1 - lam) * det.g[i]));
      bad_z += zres > 1e-9 * (1.0 + norm(z)) / (1 - lam);

      // ||grad M||^2 = 8 zeta^2 ||x-z||^2 + ||grad f(z)||^2 + 4 zeta <grad f(z), z-x>
      const double zeta = 3.0 * pb.L / (1 - lam);
      Vector gz(d), zx(d);
      pb.eval(z, gz);
      for (std::size_t i = 0; i < d; ++i) zx[i] = z[i] - st.x_curr[i];
      const double gM2 = merit_gradient(pb, mp, st.x_curr, z).norm_sq();
      const double xz2 = norm_sq(zx), gz2 = norm_sq(gz);
      const double expanded = 8 * zeta * zeta * xz2 + gz2 + 4 * zeta * dot(gz, zx);
      const double mag = 12 * zeta * zeta * xz2 + 2 * gz2;
      bad_expansion += std::abs(gM2 - expanded) > 1e-10 * (1.0 + mag);

      const double tol = 1e-10 * (1.0 + mag);
      bad_bounds += (4 * zeta * zeta * xz2 > gM2 + tol) || (gz2 > 2 * gM2 + tol) ||
                    (gM2 > 12 * zeta * zeta * xz2 + 2 * gz2 + tol);
    }
  }
  const bool ok = !bad_update && !bad_z && !bad_expansion && !bad_bounds;
  return {ok, std::to_string(samples) + " samples; failures: update " + std::to_string(bad_update) +
                  ", z recursion " + std::to_string(bad_z) + ", merit expansion " +
                  std::to_string(bad_expansion) + ", gradient bounds " + std::to_string(bad_bounds)};
}

// -- 3 -----------------------------------------------------------------------

Outcome sin_toy_path() {
  const auto cfg = load_config((kConfigs / "acceptance/sin_toy_cauchy.cfg").string());
  const auto s = run_experiment(cfg).summary;
  const auto* c = criterion(s, "step_lower_bound");
  if (!c || !s.seeds[0].step_lower_bound) return {false, "no step lower bound recorded"};
  const auto& lb = *s.seeds[0].step_lower_bound;
  const bool ok = c->passed && lb.checked == 100000 && lb.total_length >= 12.0;
  return {ok, std::to_string(lb.satisfied) + "/" + std::to_string(lb.checked) +
                  " steps with move >= alpha_k; path length " + num(lb.total_length)};
}

// -- 4 -----------------------------------------------------------------------

Outcome window_lengths() {
  std::size_t rows = 0, bad = 0, windows = 0;
  std::string first_bad;
  for (const auto& path : matrix_configs()) {
    const auto cfg = load_config(path.string());
    const auto pb = make_problem(cfg.problem_name, cfg.dim, cfg.problem_params);
    const double T = cfg.T.value_or(default_window(pb.L, cfg.params));
    const auto part = build_partition(cfg.schedule, T, cfg.horizon);
    const auto rep = verify_window_lengths(part, cfg.schedule, 0.9);
    ++rows;
    windows += part.windows();
    if (!rep.violations.empty()) {
      ++bad;
      if (first_bad.empty()) first_bad = path.stem().string();
    }
  }
  return {rows == 18 && bad == 0, std::to_string(rows) + " matrix rows, " + std::to_string(windows) +
                                      " windows, rows with violations past K_delta: " +
                                      std::to_string(bad) + (first_bad.empty() ? "" : " (" + first_bad + ")")};
}

// -- 5, 6 --------------------------------------------------------------------

struct MatrixRun {
  std::string name;
  RunSummary summary;
};

const std::vector<MatrixRun>& matrix_runs() {
  static const std::vector<MatrixRun> runs = [] {
    std::vector<MatrixRun> out;
    for (const auto& path : matrix_configs())
      out.push_back({path.stem().string(), run_experiment(load_config(path.string())).summary});
    return out;
  }();
  return runs;
}

Outcome window_inequalities() {
  const auto& runs = matrix_runs();
  std::size_t bad = 0, checked = 0, vacuous = 0, seeds = 0;
  std::string names;
  for (const auto& [name, s] : runs) {
    const auto* c = criterion(s, "window_inequalities");
    if (!c || !c->passed) {
      ++bad;
      names += " " + name;
    }
    std::size_t row_checked = 0;
    for (const auto& r : s.seeds) {
      row_checked += r.descent_checked;
      seeds += 1;
    }
    checked += row_checked;
    vacuous += row_checked == 0;
  }
  return {runs.size() == 18 && bad == 0,
          std::to_string(runs.size()) + " rows x 20 seeds (" + std::to_string(seeds) + " runs), " +
              std::to_string(checked) + " windows checked past K_T, failing rows " + std::to_string(bad) + names +
              "; rows where K_T lies beyond the horizon: " + std::to_string(vacuous)};
}

Outcome stationarity() {
  const auto& runs = matrix_runs();
  std::size_t bad = 0;
  double worst = 0.0;
  std::string names;
  for (const auto& [name, s] : runs) {
    const auto* c = criterion(s, "stationarity");
    if (!c || !c->passed) {
      ++bad;
      names += " " + name;
    }
    if (!s.median_decades.grad_norm.empty()) worst = std::max(worst, s.median_decades.grad_norm.front());
  }
  return {runs.size() == 18 && bad == 0, "failing rows " + std::to_string(bad) + names +
                                             "; largest final-decade median gradient " + num(worst)};
}

// -- 7, 8 --------------------------------------------------------------------

Outcome rate_run(const char* file, bool with_dist) {
  const auto cfg = load_config((kConfigs / "acceptance" / file).string());
  const auto s = run_experiment(cfg).summary;
  const auto* f = criterion(s, "rate_f_gap");
  const auto* d = criterion(s, "rate_dist");
  bool ok = f && f->passed && s.divergent == 0;
  std::string detail = "f gap: " + (f ? f->detail : std::string("missing"));
  if (with_dist) {
    ok = ok && d && d->passed;
    detail += "; distance: " + (d ? d->detail : std::string("missing"));
  }
  return {ok, detail + "; divergent " + std::to_string(s.divergent)};
}

// -- 9 -----------------------------------------------------------------------

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) r.push_back(std::stod(cell));
    rows.push_back(std::move(r));
  }
  return rows;
}

Outcome rate_curves() {
  const fs::path dir = fs::temp_directory_path() / ("sgdm_acceptance_curves_" + std::to_string(::getpid()));
  write_rate_curves(parse_grid_spec(kDefaultGridSpec), dir);
  double worst = 0.0;
  std::size_t points = 0, transitions = 0;
  for (const auto& r : read_csv(dir / "rate_curves_gamma.csv")) {
    const auto want = rate_Phi_Psi(r[0], r[1]);
    worst = std::max({worst, std::abs(r[2] - want.Psi), std::abs(r[3] - want.Phi),
                      std::abs(r[4] - r[0] / (4 * r[0] - 2))});
    if (r[5] == 1.0) {
      ++transitions;
      worst = std::max(worst, std::abs(r[1] - r[0] / (4 * r[0] - 2)));
      // both branches meet there
      worst = std::max(worst, std::abs((2 * r[0] - 1) - (1 - r[0]) / (2 * r[1] - 1)));
    }
    ++points;
  }
  for (const auto& r : read_csv(dir / "rate_curves_optimal.csv")) {
    const double th = r[0];
    worst = std::max({worst, std::abs(r[1] - 2 * th / (4 * th - 1)), std::abs(r[2] - 1 / (4 * th - 1)),
                      std::abs(r[3] - (1 - th) / (4 * th - 1)),
                      std::abs(r[4] - (4 * th - 1) / (6 * th - 2)), std::abs(r[5] - 1 / (6 * th - 2))});
    ++points;
  }
  fs::remove_all(dir);
  return {worst <= 1e-12 && transitions == 4 && points == 204 + 50,
          std::to_string(points) + " rows, " + std::to_string(transitions) +
              " transition points, largest deviation " + num(worst)};
}

// -- 10 ----------------------------------------------------------------------

Outcome chung_grids() {
  double worst = 0.0;
  std::size_t passed = 0, total = 0;
  for (double q : {1.0, 2.0, 3.0})
    for (double dt : {0.2, 0.5, 0.8}) {
      const auto r = chung_bound_check({q, 1.0, 1.0, 1.0 + dt * q, q}, 1000000);
      passed += r.passed && r.worst_ratio <= 1.05;
      worst = std::max(worst, r.worst_ratio);
      ++total;
    }
  for (double s : {0.3, 0.5, 0.6})
    for (double q : {1.0, 2.0, 4.0}) {
      const auto r = chung_bound_check({q, 1.0, s, s + 1.0, 2.0}, 1000000);
      passed += r.passed && r.worst_ratio <= 1.05;
      worst = std::max(worst, r.worst_ratio);
      ++total;
    }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) +
                               " grid points pass, worst tail ratio " + num(worst)};
}

// -- 11 ----------------------------------------------------------------------

Outcome estimator_oracle() {
  std::vector<double> ks;
  for (int i = 0; i < 400; ++i) ks.push_back(std::round(std::pow(1e6, i / 399.0)));
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  double clean = 0.0, noisy = 0.0;
  for (double p : {0.2, 0.5, 0.8, 1.0}) {
    std::vector<double> a, b;
    for (double k : ks) {
      a.push_back(std::pow(k, -p));
      b.push_back(std::pow(k, -p) * (1 + 0.01 * n01(rng)));
    }
    clean = std::max(clean, std::abs(estimate_exponent(ks, a, 0.5).exponent - p));
    noisy = std::max(noisy, std::abs(estimate_exponent(ks, b, 0.5).exponent - p));
  }
  return {clean <= 1e-6 && noisy <= 0.02,
          "worst error " + num(clean) + " noiseless, " + num(noisy) + " with 1% noise"};
}

// -- 12 ----------------------------------------------------------------------

Outcome negative_controls() {
  std::vector<std::string> missed;
  if (validate_schedule(StepSchedule::polynomial(1.0, 0.0, 0.5), GlobalRegime{}).ok())
    missed.push_back("gamma = 0.5 accepted for the global regime");
  const auto c = StepSchedule::constant(0.01);
  if (validate_schedule(c, GlobalRegime{}).ok()) missed.push_back("constant accepted (global)");
  if (validate_schedule(c, LojaRegime{1.0}).ok()) missed.push_back("constant accepted (loja)");
  if (validate_schedule(c, RateRegime{PowerGrowth{1.0}}).ok()) missed.push_back("constant accepted (rate)");
  try {
    parse_config("problem.name = quadratic\nopt.lambda = 1\nschedule.kind = polynomial\nschedule.alpha = 0.1\n");
    missed.push_back("lambda = 1 accepted");
  } catch (const ConfigError&) {
  }
  std::string detail = missed.empty() ? "all 5 controls rejected" : "";
  for (const auto& m : missed) detail += (detail.empty() ? "" : "; ") + m;
  return {missed.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<Criterion> all{
      {1, "harmonic window partition", 1, harmonic_partition},
      {2, "algebraic identities", 10, identities},
      {3, "sin_toy step lower bound", 5, sin_toy_path},
      {4, "window lengths across the matrix", 60, window_lengths},
      {5, "window inequalities across the matrix", 600, window_inequalities},
      {6, "stationarity across the matrix", 600, stationarity},
      {7, "rates at theta = 1/2", 600, [] { return rate_run("rate_quadratic.cfg", true); }},
      {8, "rates at theta = 3/4", 600, [] { return rate_run("rate_quartic.cfg", false); }},
      {9, "rate curve data", 1, rate_curves},
      {10, "Chung recursion bounds", 10, chung_grids},
      {11, "exponent estimator", 5, estimator_oracle},
      {12, "negative controls", 1, negative_controls},
  };

  int failed = 0;
  double shared = 0.0;  // 5 and 6 share the matrix runs
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 5) shared = secs;
    if (c.id == 6) secs += shared;
    const bool in_time = secs <= c.budget_s;
    const bool ok = o.passed && in_time;
    failed += !ok;
    std::printf("%s %2d %-40s %8.2fs (budget %gs%s)  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, in_time ? "" : ", exceeded", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
