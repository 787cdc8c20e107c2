#include <doctest.h>

#include <string>

#include "sgdm/config.hpp"
#include "sgdm/errors.hpp"

using namespace sgdm;

namespace {

const std::string kBase = R"(# minimal run
problem.name = quadratic
problem.dim = 3
schedule.kind = polynomial
schedule.alpha = 0.1
schedule.gamma = 0.9
)";

std::vector<std::string> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("defaults for a minimal document") {
  const auto c = parse_config(kBase);
  CHECK(c.problem_name == "quadratic");
  CHECK(c.dim == 3);
  CHECK(c.params.lambda() == 0.0);
  CHECK(c.schedule.is_polynomial());
  CHECK(c.schedule(1) == doctest::Approx(0.1));
  CHECK(c.noise.is_none());
  CHECK(c.horizon == 1000);
  CHECK(c.seeds == 1);
  CHECK(c.delta == 0.9);
  CHECK_FALSE(c.T);
  CHECK(c.regime == TargetRegime::none);
  CHECK(c.traces == TraceMode::first);
}

TEST_CASE("presets") {
  auto c = parse_config(kBase + "opt.preset = snag\nopt.lambda = 0.5\n");
  CHECK(c.params.lambda() == 0.5);
  CHECK(c.params.nu() == 0.5);
  c = parse_config(kBase + "opt.preset = shb\nopt.lambda = 0.9\n");
  CHECK(c.params.nu() == 0.0);
  c = parse_config(kBase + "opt.lambda = 0.3\nopt.nu = 2\n");
  CHECK(c.params.nu() == 2.0);
  CHECK(mentions(issues_of(kBase + "opt.preset = shb\n"), "opt.lambda"));
  CHECK(mentions(issues_of(kBase + "opt.preset = sgd\nopt.lambda = 0.2\n"), "preset sgd"));
  CHECK(mentions(issues_of(kBase + "opt.lambda = 1\n"), "opt"));
  CHECK(mentions(issues_of(kBase + "opt.preset = adam\n"), "unknown preset"));
}

TEST_CASE("rate targets need an admissible decay") {
  const std::string doc = R"(problem.name = quadratic
schedule.kind = polynomial
schedule.alpha = 0.1
schedule.gamma = 0.5
targets.regime = loja
targets.f_gap_tolerance = 0.15
)";
  const auto iss = issues_of(doc);
  REQUIRE_FALSE(iss.empty());
  CHECK(mentions(iss, "(2/3, 1]"));
  CHECK(parse_config(kBase + "targets.regime = loja\ntargets.f_gap_tolerance = 0.15\n").regime ==
        TargetRegime::loja);
  CHECK(mentions(issues_of(kBase + "targets.f_gap_tolerance = 0.15\n"), "targets.regime = loja"));
  // r beyond the cap for gamma = 0.9 (cap 4)
  CHECK(mentions(issues_of(kBase + "targets.regime = loja\ntargets.r = 5\n"), "divergent"));
}

TEST_CASE("every problem is reported at once") {
  const auto iss = issues_of(R"(problem.dim = two
schedule.kind = spiral
noise.kind = gaussian
run.horizon = -3
bogus.key = 1
)");
  CHECK(mentions(iss, "problem.name: required"));
  CHECK(mentions(iss, "problem.dim"));
  CHECK(mentions(iss, "schedule.kind"));
  CHECK(mentions(iss, "noise.sigma"));
  CHECK(mentions(iss, "run.horizon"));
  CHECK(mentions(iss, "bogus.key: unknown key"));
  CHECK(iss.size() >= 6);
}

TEST_CASE("syntax errors") {
  CHECK(mentions(issues_of(kBase + "justtext\n"), "expected 'key = value'"));
  CHECK(mentions(issues_of(kBase + "nodot = 1\n"), "section.name"));
  CHECK(mentions(issues_of(kBase + "run.seeds = 2\nrun.seeds = 3\n"), "duplicate"));
  CHECK(mentions(issues_of(kBase + "targets.stationarity = maybe\n"), "boolean"));
  CHECK(mentions(issues_of(kBase + "output.dir = ../escape\n"), "output.dir"));
}

TEST_CASE("problem parameters reach the registry") {
  auto c = parse_config(kBase + "problem.mu = 0.5\nproblem.lq = 4\nproblem.x0 = 1, 2, 3\n");
  CHECK(c.problem_params.values.at("mu") == 0.5);
  CHECK(c.x0 == Vector{1.0, 2.0, 3.0});
  CHECK(mentions(issues_of(kBase + "problem.x0 = 1, 2\n"), "problem.x0"));
  CHECK(mentions(issues_of(kBase + "problem.mu = -1\n"), "problem"));
  CHECK_FALSE(issues_of("problem.name = nosuch\nschedule.kind = constant\nschedule.value = 0.1\n").empty());
}

TEST_CASE("noise kinds and schedule kinds") {
  auto c = parse_config(kBase + "noise.kind = axis_rademacher\nnoise.axis = 2\n");
  CHECK_FALSE(c.noise.is_none());
  CHECK(mentions(issues_of(kBase + "noise.kind = axis_rademacher\nnoise.axis = 3\n"), "noise.axis"));
  c = parse_config("problem.name = quadratic\nschedule.kind = explicit\nschedule.values = 0.3, 0.2, 0.1\nrun.horizon = 4\n");
  CHECK(c.schedule(3) == doctest::Approx(0.1));
  c = parse_config("problem.name = quadratic\nschedule.kind = constant\nschedule.value = 0.01\n");
  CHECK(c.schedule(1000) == 0.01);
}

TEST_CASE("diagnostic toggles") {
  CHECK(mentions(issues_of(kBase + "run.stride = 10\ndiag.step_lower_bound = true\n"), "stride"));
  CHECK(mentions(issues_of(kBase + "targets.min_total_length = 3\n"), "step_lower_bound"));
  const auto c = parse_config(kBase + "windows.T = 0.001\nwindows.delta = 0.5\n");
  CHECK(*c.T == 0.001);
  CHECK(c.delta == 0.5);
  CHECK(mentions(issues_of(kBase + "windows.delta = 1\n"), "windows.delta"));
}

TEST_CASE("canonical form ignores comments, order and spacing") {
  const auto a = parse_config(kBase + "run.seeds = 4\n");
  const auto b = parse_config(
      "run.seeds=4\n# reordered\nschedule.gamma = 0.9\nschedule.alpha = 0.1\n"
      "schedule.kind = polynomial\nproblem.dim = 3\nproblem.name = quadratic   # trailing\n");
  CHECK(a.canonical == b.canonical);
  CHECK(fnv1a_hex(a.canonical) == fnv1a_hex(b.canonical));
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), Error);
}
