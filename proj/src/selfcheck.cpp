#include "sgdm/selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "sgdm/diagnostics.hpp"
#include "sgdm/errors.hpp"
#include "sgdm/rates.hpp"

namespace sgdm {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

Problem half_square() {
  ProblemParams pp;
  pp.spectrum = {1.0};
  return make_problem("quadratic", 1, pp);
}

double step_from(double x, double x_prev, double lambda, double nu) {
  IterateState st{1, {x_prev}, {x}};
  auto [next, detail] = sgdm_step(st, MomentumParams(lambda, nu), 0.1, half_square(), NoiseModel::none(),
                                  NoiseStream(0));
  return next.x_curr[0];
}

}  // namespace

std::vector<CheckResult> self_check() {
  std::vector<CheckResult> out;
  auto run = [&](const char* name, const std::function<std::pair<bool, std::string>()>& f) {
    try {
      auto [ok, detail] = f();
      out.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };

  run("partition_harmonic", [] {
    const auto p = build_partition(StepSchedule::polynomial(1.0, 0.0, 1.0), 1.0, 20);
    const bool ok = p.gamma.size() >= 4 && p.gamma[0] == 1 && p.gamma[1] == 2 && p.gamma[2] == 4 &&
                    p.gamma[3] == 10;
    std::string g;
    for (std::size_t i = 0; i < std::min<std::size_t>(4, p.gamma.size()); ++i)
      g += (i ? "," : "") + std::to_string(p.gamma[i]);
    return std::pair{ok, "gamma = " + g};
  });
  run("sgdm_step", [] {
    const double a = step_from(1.0, 1.0, 0.0, 0.0);
    const double b = step_from(0.9, 1.0, 0.5, 0.0);
    const double c = step_from(0.9, 1.0, 0.5, 0.5);
    return std::pair{near(a, 0.9) && near(b, 0.76) && near(c, 0.765),
                     num(a) + " " + num(b) + " " + num(c)};
  });
  run("auxiliary_sequence", [] {
    const double z = auxiliary_z(IterateState{2, {1.0}, {0.9}}, 0.5)[0];
    const double z_next = auxiliary_z(IterateState{3, {0.9}, {0.76}}, 0.5)[0];
    return std::pair{near(z, 0.8) && near(z_next, 0.62), num(z) + " -> " + num(z_next)};
  });
  run("merit", [] {
    const double m = merit_value(half_square(), MomentumParams::sgd(), Vector{0.0}, Vector{1.0});
    return std::pair{near(m, 3.5), num(m)};
  });
  run("rate_formulas", [] {
    const auto a = rate_Phi_Psi(0.9, 0.5);
    const auto b = rate_Phi_Psi(0.8, 2.0 / 3.0);
    const auto o = optimal_gamma(0.75);
    const bool ok = near(a.Psi, 0.8) && near(a.Phi, 0.35) && near(b.theta_c, 2.0 / 3.0) &&
                    near(b.Psi, 0.6) && near(o.gamma_star, 0.75) && near(o.Psi_at_star, 0.5) &&
                    near(o.Phi_at_star, 0.125) && near(o.tadic_gamma, 0.8) && near(o.tadic_rate, 0.4);
    return std::pair{ok, "Psi(0.9,0.5)=" + num(a.Psi) + " gamma*(0.75)=" + num(o.gamma_star)};
  });
  run("schedule_validity", [] {
    const auto half = validate_schedule(StepSchedule::polynomial(1.0, 0.0, 0.5), GlobalRegime{});
    const auto cst = validate_schedule(StepSchedule::constant(0.1), GlobalRegime{});
    const auto good = validate_schedule(StepSchedule::polynomial(1.0, 0.0, 0.9), LojaRegime{1.0});
    return std::pair{half.verdict == Verdict::invalid && cst.verdict == Verdict::invalid && good.ok(),
                     std::string(to_string(half.verdict)) + "/" + to_string(cst.verdict) + "/" +
                         to_string(good.verdict)};
  });
  run("exponent_fit", [] {
    std::vector<double> ks, v;
    for (int i = 0; i <= 200; ++i) {
      const double k = std::round(std::pow(10.0, 2.0 + 4.0 * i / 200.0));
      if (!ks.empty() && k <= ks.back()) continue;
      ks.push_back(k);
      v.push_back(std::pow(k, -0.8));
    }
    const double e = estimate_exponent(ks, v, 0.5).exponent;
    return std::pair{near(e, 0.8, 1e-6), num(e)};
  });
  run("chung_a", [] {
    const auto r = chung_bound_check({2.0, 1.0, 1.0, 1.5, 0.0}, 100000);
    return std::pair{r.passed, "worst ratio " + num(r.worst_ratio)};
  });
  return out;
}

}  // namespace sgdm
