#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "sgdm/errors.hpp"
#include "sgdm/output.hpp"
#include "sgdm/rates.hpp"

using namespace sgdm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sgdm_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config() {
  return parse_config(R"(problem.name = quadratic
problem.dim = 2
opt.preset = shb
opt.lambda = 0.5
schedule.kind = polynomial
schedule.alpha = 0.05
schedule.gamma = 0.9
noise.kind = gaussian
noise.sigma = 0.1
run.horizon = 5000
run.seeds = 2
output.traces = all
)");
}

}  // namespace

TEST_CASE("shortest decimal form") {
  CHECK(format_double(0.025) == "0.025");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("grid specs") {
  const auto g = parse_grid_spec(kDefaultGridSpec);
  REQUIRE(g.theta.size() == 50);
  CHECK(g.theta.front() == 0.5);
  CHECK(g.theta.back() == doctest::Approx(0.99).epsilon(1e-15));
  CHECK(g.gamma == std::vector<double>{0.7, 0.8, 0.9, 0.999});
  CHECK_THROWS_AS(parse_grid_spec("theta=0.4:0.9:0.1;gamma=0.8"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid_spec("theta=0.5;gamma=0.5"), InvalidArgument);
  CHECK_THROWS_AS(parse_grid_spec("gamma=0.8"), InvalidArgument);
}

TEST_CASE("rate curves pass the formulas through") {
  TempDir tmp;
  const auto grid = parse_grid_spec(kDefaultGridSpec);
  const auto files = write_rate_curves(grid, tmp.path);
  REQUIRE(files.size() == 2);
  const auto rows = lines(tmp.path / "rate_curves_gamma.csv");
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "gamma,theta,Psi,Phi,theta_c,is_transition");
  std::size_t transitions = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto v = split_numbers(rows[i]);
    REQUIRE(v.size() == 6);
    const auto r = rate_Phi_Psi(v[0], v[1]);
    CHECK(std::abs(v[2] - r.Psi) <= 1e-12);
    CHECK(std::abs(v[3] - r.Phi) <= 1e-12);
    CHECK(std::abs(v[4] - r.theta_c) <= 1e-12);
    if (v[5] == 1.0) {
      ++transitions;
      CHECK(std::abs(v[1] - r.theta_c) <= 1e-12);
    }
  }
  CHECK(transitions == 4);
  CHECK(rows.size() == 1 + 4 * 50 + 4);

  const auto opt = lines(tmp.path / "rate_curves_optimal.csv");
  CHECK(opt[0] == "theta,gamma_star,Psi_star,Phi_star,tadic_gamma,tadic_rate");
  REQUIRE(opt.size() == 51);
  for (std::size_t i = 1; i < opt.size(); ++i) {
    const auto v = split_numbers(opt[i]);
    const auto o = optimal_gamma(v[0]);
    CHECK(std::abs(v[1] - o.gamma_star) <= 1e-12);
    CHECK(std::abs(v[2] - o.Psi_at_star) <= 1e-12);
    CHECK(std::abs(v[3] - o.Phi_at_star) <= 1e-12);
    CHECK(std::abs(v[4] - o.tadic_gamma) <= 1e-12);
    CHECK(std::abs(v[5] - o.tadic_rate) <= 1e-12);
  }
}

TEST_CASE("emitted files are complete and byte-stable") {
  TempDir a, b;
  const auto cfg = small_config();
  const auto ra = run_experiment(cfg);
  const auto rb = run_experiment(cfg);
  const auto fa = emit_outputs(ra, a.path);
  const auto fb = emit_outputs(rb, b.path);
  REQUIRE(fa.size() == 5);
  REQUIRE(fa.size() == fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    CHECK(fa[i].filename() == fb[i].filename());
    CHECK(slurp(fa[i]) == slurp(fb[i]));
  }

  const auto steps = lines(a.path / "steps_seed0.csv");
  CHECK(steps[0] == "k,alpha_k,f_gap,grad_norm,dist_to_min");
  CHECK(steps.size() == 1 + 5000);
  const auto win = lines(a.path / "windows_seed1.csv");
  CHECK(win[0] ==
        "k,gamma_k,gamma_next,Delta,s_k,d_k,u_k,M_k,gradM_norm,res_36,res_37,res_descent,applicable_flag");
  CHECK(win.size() == 1 + ra.summary.window_lengths->windows);

  const auto js = slurp(a.path / "summary.json");
  CHECK(js.find("\"config_hash\"") != std::string::npos);
  CHECK(js.find("NaN") == std::string::npos);
}

TEST_CASE("partition report") {
  TempDir tmp;
  const auto sch = StepSchedule::polynomial(1.0, 0.0, 1.0);
  const auto part = build_partition(sch, 1.0, 40);
  write_partition_csv(part, verify_window_lengths(part, sch, 0.5), tmp.path / "p.csv");
  const auto rows = lines(tmp.path / "p.csv");
  CHECK(rows[0] == "k,gamma_k,gamma_next,Delta,within_bounds");
  CHECK(rows[1].rfind("1,1,2,1,", 0) == 0);
  CHECK(rows.size() == 1 + part.windows());
}

TEST_CASE("output root follows the environment") {
  ::setenv("SGDM_OUTPUT_ROOT", "/tmp/sgdm_root", 1);
  CHECK(output_root("x") == fs::path("/tmp/sgdm_root/x"));
  ::unsetenv("SGDM_OUTPUT_ROOT");
  CHECK(output_root("x") == fs::path("./x"));
}
