// sgdm: run SGDM experiments, window reports, rate curves and a quick self-test.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "sgdm/config.hpp"
#include "sgdm/errors.hpp"
#include "sgdm/experiment.hpp"
#include "sgdm/output.hpp"
#include "sgdm/selfcheck.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kUsage = 1;
constexpr int kViolation = 2;

int report_config_error(const sgdm::ConfigError& e) {
  std::cerr << "config rejected:\n";
  for (const auto& i : e.issues()) std::cerr << "  " << i << "\n";
  return kUsage;
}

int cmd_run(const std::string& path, std::uint64_t offset, bool quiet) {
  const sgdm::ExperimentConfig cfg = sgdm::load_config(path);
  const sgdm::ExperimentResult res = sgdm::run_experiment(cfg, offset);
  const auto dir = sgdm::output_root(cfg.output_dir);
  const auto files = sgdm::emit_outputs(res, dir);
  const auto& s = res.summary;
  if (!quiet) {
    std::cout << "config " << s.config_hash << "  " << s.problem << "  " << s.schedule << "\n";
    std::cout << "seeds " << s.seeds.size() << " (" << s.divergent << " divergent)\n";
    for (const auto& c : s.criteria)
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  }
  return s.passed() ? kPass : kViolation;
}

int cmd_windows(const std::string& path) {
  const sgdm::ExperimentConfig cfg = sgdm::load_config(path);
  const sgdm::Problem pb = sgdm::make_problem(cfg.problem_name, cfg.dim, cfg.problem_params);
  const double T = cfg.T.value_or(sgdm::default_window(pb.L, cfg.params));
  const auto part = sgdm::build_partition(cfg.schedule, T, cfg.horizon);
  const auto rep = sgdm::verify_window_lengths(part, cfg.schedule, cfg.delta);
  const auto dir = sgdm::output_root(cfg.output_dir);
  std::filesystem::create_directories(dir);
  const auto file = dir / "partition.csv";
  sgdm::write_partition_csv(part, rep, file);
  auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("none"); };
  std::cout << "T " << sgdm::format_double(T) << "  windows " << part.windows() << "  delta " << rep.delta
            << "\nK_delta (observed) " << opt(rep.k_delta) << "  K_delta (certified) "
            << opt(rep.k_delta_certified) << "  violations past certified " << rep.violations.size()
            << "\nwrote " << file.string() << "\n";
  return rep.violations.empty() ? kPass : kViolation;
}

int cmd_rates(const std::string& spec, const std::string& out) {
  const auto grid = sgdm::parse_grid_spec(spec);
  const auto files = sgdm::write_rate_curves(grid, sgdm::output_root(out));
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return kPass;
}

int cmd_check() {
  bool ok = true;
  for (const auto& r : sgdm::self_check()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kPass : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SGDM experiment harness"};
  app.require_subcommand(1);
  std::uint64_t seed_offset = 0;
  app.add_option("--seed-offset", seed_offset, "Added to every seed (trial sharding)");

  std::string config;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config, "Config file")->required();
  run->add_flag("-q,--quiet", quiet, "No console report");

  std::string wconfig;
  auto* win = app.add_subcommand("windows", "Partition and window-length report");
  win->add_option("config", wconfig, "Config file")->required();

  std::string curves = sgdm::kDefaultGridSpec;
  std::string curves_out = "rate_curves";
  auto* rates = app.add_subcommand("rates", "Emit rate curve data");
  rates->add_option("--curves", curves, "Grid spec, e.g. theta=0.5:0.99:0.01;gamma=0.7,0.9");
  rates->add_option("--out", curves_out, "Subdirectory of the output root");

  auto* check = app.add_subcommand("check", "Quick self-test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(config, seed_offset, quiet);
    if (*win) return cmd_windows(wconfig);
    if (*rates) return cmd_rates(curves, curves_out);
    if (*check) return cmd_check();
  } catch (const sgdm::ConfigError& e) {
    return report_config_error(e);
  } catch (const sgdm::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kUsage;
}
