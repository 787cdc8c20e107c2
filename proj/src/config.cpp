#include "sgdm/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sgdm/errors.hpp"

namespace sgdm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        issue("line " + std::to_string(no) + ": expected 'key = value'");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty() || key.find('.') == std::string::npos) {
        issue("line " + std::to_string(no) + ": key '" + key + "' must be section.name");
        continue;
      }
      if (val.empty()) {
        issue(key + ": empty value");
        continue;
      }
      if (!kv_.emplace(key, val).second) issue(key + ": duplicate key");
    }
  }

  void issue(std::string s) { issues_.push_back(std::move(s)); }
  std::vector<std::string>& issues() { return issues_; }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::optional<std::string> str(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::optional<double> num(const std::string& key) {
    auto s = str(key);
    if (!s) return std::nullopt;
    auto v = parse_double(*s);
    if (!v) issue(key + ": '" + *s + "' is not a finite number");
    return v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto s = str(key);
    if (!s) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s->c_str(), &end, 10);
    if (errno != 0 || end == s->c_str() || *end != '\0' || s->front() == '-') {
      issue(key + ": '" + *s + "' is not a non-negative integer");
      return std::nullopt;
    }
    return static_cast<std::size_t>(v);
  }

  std::optional<bool> flag(const std::string& key) {
    auto s = str(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes") return true;
    if (*s == "false" || *s == "0" || *s == "no") return false;
    issue(key + ": '" + *s + "' is not a boolean");
    return std::nullopt;
  }

  std::optional<Vector> list(const std::string& key) {
    auto s = str(key);
    if (!s) return std::nullopt;
    Vector out;
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto v = parse_double(trim(item));
      if (!v) {
        issue(key + ": '" + trim(item) + "' is not a finite number");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  /// Keys under `prefix` that nobody consumed yet.
  std::vector<std::pair<std::string, std::string>> remaining(const std::string& prefix) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, v] : kv_)
      if (!used_.count(k) && k.rfind(prefix, 0) == 0) out.emplace_back(k, v);
    return out;
  }
  void mark(const std::string& key) { used_.insert(key); }

  std::string canonical() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  static std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end == s.c_str() || *end != '\0' || !std::isfinite(v)) return std::nullopt;
    return v;
  }

  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
  std::vector<std::string> issues_;
};

template <class F>
void guarded(Reader& rd, const std::string& field, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    rd.issue(field + ": " + e.what());
  }
}

void read_problem(Reader& rd, ExperimentConfig& c) {
  auto name = rd.str("problem.name");
  if (!name) rd.issue("problem.name: required");
  if (auto d = rd.count("problem.dim")) c.dim = *d;
  if (auto x0 = rd.list("problem.x0")) c.x0 = *x0;
  if (auto sp = rd.list("problem.spectrum")) c.problem_params.spectrum = *sp;
  for (const auto& [key, val] : rd.remaining("problem.")) {
    auto v = rd.num(key);
    if (v) c.problem_params.values[key.substr(8)] = *v;
  }
  if (!name) return;
  c.problem_name = *name;
  guarded(rd, "problem", [&] {
    const Problem p = make_problem(c.problem_name, c.dim, c.problem_params);
    if (!c.x0.empty() && c.x0.size() != p.dim)
      rd.issue("problem.x0: has " + std::to_string(c.x0.size()) + " entries, dimension is " +
               std::to_string(p.dim));
    c.dim = p.dim;
  });
}

void read_optimizer(Reader& rd, ExperimentConfig& c) {
  c.preset = rd.str("opt.preset").value_or("custom");
  auto lambda = rd.num("opt.lambda");
  auto nu = rd.num("opt.nu");
  guarded(rd, "opt", [&] {
    if (c.preset == "sgd") {
      if (lambda || nu) rd.issue("opt: preset sgd fixes lambda = nu = 0");
      c.params = MomentumParams::sgd();
    } else if (c.preset == "shb") {
      if (!lambda) rd.issue("opt.lambda: required for preset shb");
      if (nu) rd.issue("opt.nu: preset shb fixes nu = 0");
      if (lambda) c.params = MomentumParams::heavy_ball(*lambda);
    } else if (c.preset == "snag") {
      if (!lambda) rd.issue("opt.lambda: required for preset snag");
      if (nu) rd.issue("opt.nu: preset snag fixes nu = lambda");
      if (lambda) c.params = MomentumParams::nesterov(*lambda);
    } else if (c.preset == "custom") {
      c.params = MomentumParams(lambda.value_or(0.0), nu.value_or(0.0));
    } else {
      rd.issue("opt.preset: unknown preset '" + c.preset + "' (sgd, shb, snag, custom)");
    }
  });
}

void read_schedule(Reader& rd, ExperimentConfig& c) {
  const std::string kind = rd.str("schedule.kind").value_or("polynomial");
  guarded(rd, "schedule", [&] {
    if (kind == "polynomial") {
      auto a = rd.num("schedule.alpha");
      if (!a) rd.issue("schedule.alpha: required for a polynomial schedule");
      const double b = rd.num("schedule.beta").value_or(0.0);
      const double g = rd.num("schedule.gamma").value_or(1.0);
      if (a) c.schedule = StepSchedule::polynomial(*a, b, g);
    } else if (kind == "constant") {
      auto v = rd.num("schedule.value");
      if (!v) rd.issue("schedule.value: required for a constant schedule");
      else c.schedule = StepSchedule::constant(*v);
    } else if (kind == "explicit") {
      auto v = rd.list("schedule.values");
      if (!v) rd.issue("schedule.values: required for an explicit schedule");
      else c.schedule = StepSchedule::explicit_list(*v);
    } else {
      rd.issue("schedule.kind: unknown kind '" + kind + "' (polynomial, constant, explicit)");
    }
  });
}

void read_noise(Reader& rd, ExperimentConfig& c) {
  const std::string kind = rd.str("noise.kind").value_or("none");
  auto sigma = rd.num("noise.sigma");
  auto axis = rd.count("noise.axis");
  guarded(rd, "noise", [&] {
    if (kind == "none") {
      c.noise = NoiseModel::none();
    } else if (kind == "gaussian" || kind == "sphere") {
      if (!sigma) {
        rd.issue("noise.sigma: required for " + kind + " noise");
        return;
      }
      c.noise = kind == "gaussian" ? NoiseModel::gaussian(*sigma) : NoiseModel::sphere(*sigma);
    } else if (kind == "axis_rademacher") {
      const std::size_t ax = axis.value_or(0);
      if (ax >= c.dim) rd.issue("noise.axis: must be below the dimension");
      c.noise = NoiseModel::axis_rademacher(ax);
    } else {
      rd.issue("noise.kind: unknown kind '" + kind + "' (none, gaussian, axis_rademacher, sphere)");
    }
  });
}

void read_run(Reader& rd, ExperimentConfig& c) {
  if (auto h = rd.count("run.horizon")) c.horizon = *h;
  if (auto s = rd.count("run.seeds")) c.seeds = *s;
  if (auto b = rd.count("run.base_seed")) c.base_seed = *b;
  if (auto s = rd.count("run.stride")) c.stride = *s;
  if (auto d = rd.num("run.divergence_cap")) c.divergence_cap = *d;
  if (auto t = rd.count("run.threads")) c.threads = *t;
  if (c.horizon < 1) rd.issue("run.horizon: must be >= 1");
  if (c.seeds < 1) rd.issue("run.seeds: must be >= 1");
  if (c.stride < 1) rd.issue("run.stride: must be >= 1");
  if (!(c.divergence_cap > 0.0)) rd.issue("run.divergence_cap: must be positive");
}

void read_windows(Reader& rd, ExperimentConfig& c) {
  if (auto e = rd.flag("windows.enabled")) c.windows_enabled = *e;
  if (auto t = rd.num("windows.T")) {
    if (!(*t > 0.0)) rd.issue("windows.T: must be positive");
    c.T = *t;
  }
  if (auto d = rd.num("windows.delta")) {
    if (!(*d >= 0.0 && *d < 1.0)) rd.issue("windows.delta: must lie in [0, 1)");
    c.delta = *d;
  }
  if (c.windows_enabled && c.horizon < 2) rd.issue("windows.enabled: needs run.horizon >= 2");
}

void read_diag(Reader& rd, ExperimentConfig& c) {
  if (auto v = rd.flag("diag.iterate_bounds")) c.iterate_bounds = *v;
  if (auto v = rd.flag("diag.descent")) c.descent = *v;
  if (auto v = rd.flag("diag.cauchy")) c.cauchy = *v;
  if (auto v = rd.flag("diag.step_lower_bound")) c.step_lower_bound = *v;
  if (c.step_lower_bound && c.stride != 1) rd.issue("diag.step_lower_bound: needs run.stride = 1");
  if ((c.iterate_bounds || c.descent) && !c.windows_enabled && (rd.has("diag.iterate_bounds") || rd.has("diag.descent")))
    rd.issue("diag: window checks need windows.enabled = true");
}

void read_targets(Reader& rd, ExperimentConfig& c) {
  const std::string regime = rd.str("targets.regime").value_or("none");
  if (regime == "none") c.regime = TargetRegime::none;
  else if (regime == "global") c.regime = TargetRegime::global;
  else if (regime == "loja") c.regime = TargetRegime::loja;
  else rd.issue("targets.regime: unknown regime '" + regime + "' (none, global, loja)");
  if (auto r = rd.num("targets.r")) c.r = *r;
  c.f_gap_tolerance = rd.num("targets.f_gap_tolerance");
  c.dist_tolerance = rd.num("targets.dist_tolerance");
  c.grad_sq_tolerance = rd.num("targets.grad_sq_tolerance");
  c.final_f_gap_max = rd.num("targets.final_f_gap_max");
  c.min_total_length = rd.num("targets.min_total_length");
  if (auto s = rd.flag("targets.stationarity")) c.stationarity = *s;
  if (auto g = rd.num("targets.grad_threshold")) c.grad_threshold = *g;
  if (auto f = rd.num("targets.fit_from")) {
    if (!(*f > 0.0 && *f < 1.0)) rd.issue("targets.fit_from: must lie in (0, 1)");
    c.fit_from = *f;
  }
  const bool rate_targets = c.f_gap_tolerance || c.dist_tolerance || c.grad_sq_tolerance;
  if (rate_targets && c.regime != TargetRegime::loja)
    rd.issue("targets: rate tolerances need targets.regime = loja");
  if (c.min_total_length && !c.step_lower_bound)
    rd.issue("targets.min_total_length: needs diag.step_lower_bound = true");

  if (c.regime == TargetRegime::none) return;
  Regime reg = GlobalRegime{};
  if (c.regime == TargetRegime::loja) reg = LojaRegime{c.r};
  const ValidityReport rep = validate_schedule(c.schedule, reg);
  if (rep.verdict == Verdict::indeterminate) {
    rd.issue("schedule: cannot certify the " + regime + " regime for " + c.schedule.describe());
  } else if (rep.verdict == Verdict::invalid) {
    for (const auto& f : rep.failed) rd.issue("schedule (" + regime + " regime): " + f);
  }
}

void read_output(Reader& rd, ExperimentConfig& c) {
  if (auto d = rd.str("output.dir")) c.output_dir = *d;
  if (c.output_dir.find("..") != std::string::npos) rd.issue("output.dir: must not contain '..'");
  const std::string t = rd.str("output.traces").value_or("first");
  if (t == "first") c.traces = TraceMode::first;
  else if (t == "all") c.traces = TraceMode::all;
  else if (t == "none") c.traces = TraceMode::none;
  else rd.issue("output.traces: unknown mode '" + t + "' (none, first, all)");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Reader rd(text);
  ExperimentConfig c;
  read_problem(rd, c);
  read_optimizer(rd, c);
  read_schedule(rd, c);
  read_noise(rd, c);
  read_run(rd, c);
  read_windows(rd, c);
  read_diag(rd, c);
  read_targets(rd, c);
  read_output(rd, c);
  for (const auto& [k, v] : rd.remaining("")) rd.issue(k + ": unknown key");
  if (!rd.issues().empty()) throw ConfigError(rd.issues());
  c.canonical = rd.canonical();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sgdm
