#include "sgdm/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sgdm/errors.hpp"
#include "sgdm/format.hpp"
#include "sgdm/rates.hpp"

namespace sgdm {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string format_double(double v) { return shortest(v); }

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

ordered_json opt_num(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return nullptr;
  return *v;
}

ordered_json num(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

ordered_json rate_json(const std::optional<EmpiricalRate>& r) {
  if (!r) return nullptr;
  return ordered_json{{"exponent", r->exponent}, {"k_lo", r->k_lo},         {"k_hi", r->k_hi},
                      {"points", r->points},     {"residual_rms", r->residual_rms},
                      {"clipped", r->clipped}};
}

ordered_json decades_json(const DecadeProfile& d) {
  ordered_json arr = ordered_json::array();
  for (std::size_t j = 0; j < d.upper.size(); ++j)
    arr.push_back({{"k_hi", d.upper[j]},
                   {"grad_norm", num(d.grad_norm[j])},
                   {"xz_gap", num(d.xz_gap[j])},
                   {"spread", num(d.spread[j])}});
  return arr;
}

const char* kind_name(RateRegimeKind k) {
  switch (k) {
    case RateRegimeKind::polynomial: return "polynomial";
    case RateRegimeKind::log_corrected: return "log_corrected";
    case RateRegimeKind::logarithmic_only: return "logarithmic_only";
  }
  return "?";
}

std::vector<double> parse_axis(const std::string& name, const std::string& body) {
  std::vector<double> out;
  auto to_num = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
      throw InvalidArgument("grid spec: bad number '" + s + "' for " + name);
    return v;
  };
  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw InvalidArgument("grid spec: range for " + name + " must be a:b:h");
    const double a = to_num(parts[0]), b = to_num(parts[1]), h = to_num(parts[2]);
    if (!(h > 0.0) || b < a) throw InvalidArgument("grid spec: empty range for " + name);
    const auto n = static_cast<std::size_t>(std::llround((b - a) / h));
    for (std::size_t i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  } else {
    std::stringstream ss(body);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_num(p));
  }
  if (out.empty()) throw InvalidArgument("grid spec: no values for " + name);
  return out;
}

}  // namespace

std::string summary_json(const RunSummary& s) {
  ordered_json j;
  j["config_hash"] = s.config_hash;
  j["config"] = s.canonical_config;
  j["problem"] = s.problem;
  j["schedule"] = s.schedule;
  j["noise"] = s.noise;
  j["lambda"] = s.lambda;
  j["nu"] = s.nu;
  j["L"] = s.L;
  j["theta"] = s.theta;
  j["horizon"] = s.horizon;
  j["seeds"] = s.seeds.size();
  j["divergent_seeds"] = s.divergent;
  if (s.prediction) {
    j["prediction"] = {{"gamma", s.prediction->gamma},
                       {"kind", kind_name(s.prediction->kind)},
                       {"value_exponent", s.prediction->value_exponent},
                       {"iterate_exponent", s.prediction->iterate_exponent},
                       {"log_factor", s.prediction->log_factor}};
  } else {
    j["prediction"] = nullptr;
  }
  j["median"] = {{"rate_f_gap", opt_num(s.median_rate_f_gap)},
                 {"rate_grad_sq", opt_num(s.median_rate_grad_sq)},
                 {"rate_dist", opt_num(s.median_rate_dist)},
                 {"final_f_gap", opt_num(s.median_final_f_gap)},
                 {"decades", decades_json(s.median_decades)}};
  if (s.window_lengths) {
    const auto& w = *s.window_lengths;
    j["window_lengths"] = {{"T", w.T},
                           {"delta", w.delta},
                           {"windows", w.windows},
                           {"k_delta", w.k_delta ? ordered_json(*w.k_delta) : ordered_json(nullptr)},
                           {"k_delta_certified", w.k_delta_certified ? ordered_json(*w.k_delta_certified)
                                                                     : ordered_json(nullptr)},
                           {"violations", w.violations}};
  } else {
    j["window_lengths"] = nullptr;
  }
  ordered_json seeds = ordered_json::array();
  for (const auto& r : s.seeds) {
    ordered_json o;
    o["index"] = r.index;
    o["seed"] = r.seed;
    o["diverged"] = r.diverged;
    if (r.diverged) o["divergence_reason"] = r.divergence_reason;
    o["last_index"] = r.last_index;
    o["region_exits"] = r.region_exits;
    o["final_f_gap"] = num(r.final_f_gap);
    o["final_grad_norm"] = num(r.final_grad_norm);
    o["final_dist"] = num(r.final_dist);
    o["rate_f_gap"] = rate_json(r.rate_f_gap);
    o["rate_grad_sq"] = rate_json(r.rate_grad_sq);
    o["rate_dist"] = rate_json(r.rate_dist);
    o["windows"] = r.windows;
    o["K_T"] = r.K_T ? ordered_json(*r.K_T) : ordered_json(nullptr);
    o["iterate_bounds"] = {{"checked", r.bounds_checked},
                           {"violations", r.bounds_violations},
                           {"violations_before_K_T", r.bounds_violations_before}};
    o["descent"] = {{"checked", r.descent_checked},
                    {"violations", r.descent_violations},
                    {"violations_before_K_T", r.descent_violations_before},
                    {"ledger_increases", r.ledger_increases}};
    if (r.step_lower_bound)
      o["step_lower_bound"] = {{"checked", r.step_lower_bound->checked},
                               {"satisfied", r.step_lower_bound->satisfied},
                               {"total_length", r.step_lower_bound->total_length}};
    o["boundary_path_length"] = r.boundary_path_length;
    o["decades"] = decades_json(r.decades);
    seeds.push_back(std::move(o));
  }
  j["per_seed"] = std::move(seeds);
  ordered_json crit = ordered_json::array();
  for (const auto& c : s.criteria) crit.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["criteria"] = std::move(crit);
  j["passed"] = s.passed();
  return j.dump(2) + "\n";
}

void write_steps_csv(const Trajectory& tr, const fs::path& path) {
  auto out = open_out(path);
  out << "k,alpha_k,f_gap,grad_norm,dist_to_min\n";
  const auto& fs = tr.spec.problem.f_star;
  for (const auto& s : tr.steps) {
    out << s.k << ',' << format_double(s.alpha) << ','
        << format_double(fs ? s.f - *fs : std::numeric_limits<double>::quiet_NaN()) << ','
        << format_double(s.grad_norm) << ',' << format_double(s.dist) << '\n';
  }
  close_out(out, path);
}

void write_windows_csv(const WindowDiagnostics& diag, const fs::path& path) {
  auto out = open_out(path);
  out << "k,gamma_k,gamma_next,Delta,s_k,d_k,u_k,M_k,gradM_norm,res_36,res_37,res_descent,applicable_flag\n";
  for (const auto& r : diag.rows) {
    out << r.k << ',' << r.gamma_k << ',' << r.gamma_next << ',' << format_double(r.delta) << ','
        << format_double(r.s) << ',' << format_double(r.d) << ',' << format_double(r.u) << ','
        << format_double(r.merit) << ',' << format_double(r.grad_merit_norm) << ','
        << format_double(r.res_bound_spread) << ',' << format_double(r.res_bound_gap) << ','
        << format_double(r.res_descent) << ',' << (r.applicable ? 1 : 0) << '\n';
  }
  close_out(out, path);
}

void write_partition_csv(const WindowPartition& p, const WindowLengthReport& rep, const fs::path& path) {
  auto out = open_out(path);
  out << "k,gamma_k,gamma_next,Delta,within_bounds\n";
  for (std::size_t w = 0; w < p.windows(); ++w) {
    const double d = rep.lengths[w];
    const bool within = d <= p.T && d >= rep.delta * p.T;
    out << w + 1 << ',' << p.gamma[w] << ',' << p.gamma[w + 1] << ',' << format_double(d) << ','
        << (within ? 1 : 0) << '\n';
  }
  close_out(out, path);
}

RateGrid parse_grid_spec(const std::string& spec) {
  RateGrid g;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ';');) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw InvalidArgument("grid spec: expected name=values in '" + part + "'");
    const std::string name = part.substr(0, eq);
    if (name == "theta") g.theta = parse_axis(name, part.substr(eq + 1));
    else if (name == "gamma") g.gamma = parse_axis(name, part.substr(eq + 1));
    else throw InvalidArgument("grid spec: unknown axis '" + name + "'");
  }
  if (g.theta.empty() || g.gamma.empty()) throw InvalidArgument("grid spec: needs theta and gamma");
  for (double t : g.theta)
    if (!(t >= 0.5 && t < 1.0)) throw InvalidArgument("grid spec: theta must lie in [0.5, 1)");
  for (double y : g.gamma)
    if (!(y > 2.0 / 3.0 && y < 1.0)) throw InvalidArgument("grid spec: gamma must lie in (2/3, 1)");
  return g;
}

std::vector<fs::path> write_rate_curves(const RateGrid& grid, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path left = dir / "rate_curves_gamma.csv";
  const fs::path right = dir / "rate_curves_optimal.csv";
  {
    auto out = open_out(left);
    out << "gamma,theta,Psi,Phi,theta_c,is_transition\n";
    for (const double gamma : grid.gamma) {
      std::vector<std::pair<double, int>> thetas;
      for (double t : grid.theta) thetas.emplace_back(t, 0);
      const double tc = rate_Phi_Psi(gamma, 0.5).theta_c;
      if (tc >= 0.5 && tc < 1.0) thetas.emplace_back(tc, 1);
      std::stable_sort(thetas.begin(), thetas.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [theta, flag] : thetas) {
        const PhiPsi r = rate_Phi_Psi(gamma, theta);
        out << format_double(gamma) << ',' << format_double(theta) << ',' << format_double(r.Psi) << ','
            << format_double(r.Phi) << ',' << format_double(r.theta_c) << ',' << flag << '\n';
      }
    }
    close_out(out, left);
  }
  {
    auto out = open_out(right);
    out << "theta,gamma_star,Psi_star,Phi_star,tadic_gamma,tadic_rate\n";
    for (const double theta : grid.theta) {
      const OptimalGamma o = optimal_gamma(theta);
      out << format_double(theta) << ',' << format_double(o.gamma_star) << ','
          << format_double(o.Psi_at_star) << ',' << format_double(o.Phi_at_star) << ','
          << format_double(o.tadic_gamma) << ',' << format_double(o.tadic_rate) << '\n';
    }
    close_out(out, right);
  }
  return {left, right};
}

fs::path output_root(const std::string& sub) {
  const char* env = std::getenv("SGDM_OUTPUT_ROOT");
  const fs::path root = env && *env ? fs::path(env) : fs::path(".");
  return sub.empty() ? root : root / sub;
}

std::vector<fs::path> emit_outputs(const ExperimentResult& res, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<fs::path> files;
  const fs::path summary = dir / "summary.json";
  {
    auto out = open_out(summary);
    out << summary_json(res.summary);
    close_out(out, summary);
  }
  files.push_back(summary);
  for (const auto& kt : res.traces) {
    const fs::path steps = dir / ("steps_seed" + std::to_string(kt.index) + ".csv");
    write_steps_csv(kt.trajectory, steps);
    files.push_back(steps);
    if (kt.diagnostics) {
      const fs::path win = dir / ("windows_seed" + std::to_string(kt.index) + ".csv");
      write_windows_csv(*kt.diagnostics, win);
      files.push_back(win);
    }
  }
  return files;
}

}  // namespace sgdm
