// Batch front end: solve one scenario, run a sweep, print the workload
// catalog, or replay a dumped scenario.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plsoff/ao_driver.hpp"
#include "plsoff/baselines.hpp"
#include "plsoff/catalog.hpp"
#include "plsoff/config.hpp"
#include "plsoff/experiments.hpp"
#include "plsoff/scenario.hpp"

namespace fs = std::filesystem;
using namespace plsoff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir;
  std::optional<int> runs;
  bool trace = false;
  std::string dump_scenario;
  std::string scenario_path;
  bool print_config = false;
  std::string scheme = "PROPOSED";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Scenario / Monte-Carlo seed");
  cmd->add_option("--config", o.config_path, "Key-value config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_flag("--print-config", o.print_config, "Print the effective config and exit");
  cmd->add_option("overrides", o.overrides, "key=value overrides applied after --config");
}

RunConfig build_config(const Options& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg.apply(kv::Document::load(o.config_path));
  cfg.apply_overrides(o.overrides);
  if (o.seed) cfg.seed = *o.seed;
  if (o.runs) cfg.runs = *o.runs;
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
}

int run_solve(const Options& o, bool replay) {
  const RunConfig cfg = build_config(o);
  if (o.print_config) {
    std::cout << cfg.to_text();
    return kExitOk;
  }
  if (replay && o.scenario_path.empty()) throw InvalidConfigError("replay needs --scenario <path>");
  const Scenario s = o.scenario_path.empty() ? generate(cfg.scenario, cfg.seed) : load_scenario(o.scenario_path);
  if (!o.dump_scenario.empty()) save_scenario(s, o.dump_scenario);

  const SolveReport report = run_scheme(parse_scheme(o.scheme), s, cfg.solver);
  const std::string text = format_report(report);
  std::cout << text;
  std::cerr << "solved in " << report.wall_time_s << " s\n";

  const fs::path out = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  if (!o.out_dir.empty()) write_file(out / "report.txt", text);
  if (o.trace) {
    write_file(out / "sca_trace.csv", sca_trace_csv(report));
    write_file(out / "ao_trace.csv", objective_trace_csv(report));
  }
  return kExitOk;
}

int run_sweep_cmd(const Options& o) {
  const RunConfig cfg = build_config(o);
  if (o.print_config) {
    std::cout << cfg.to_text();
    return kExitOk;
  }
  const SweepResult result = run_sweep(cfg.sweep_spec());
  const fs::path out = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  emit(result, out);
  std::cout << sweep_csv(result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure offloading optimizer: latency-minimizing power, compute and offloading co-design"};
  app.require_subcommand(0, 1);
  bool catalog_flag = false;
  app.add_flag("--catalog", catalog_flag, "Print the workload catalog as CSV");

  Options solve_opts, replay_opts, sweep_opts;
  auto* solve_cmd = app.add_subcommand("solve", "Generate (or load) one scenario and solve it");
  add_common(solve_cmd, solve_opts);
  solve_cmd->add_flag("--trace", solve_opts.trace, "Write sca_trace.csv and ao_trace.csv to --out");
  solve_cmd->add_option("--dump-scenario", solve_opts.dump_scenario, "Write the scenario to this path");
  solve_cmd->add_option("--scenario", solve_opts.scenario_path, "Load the scenario instead of generating it")
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--scheme", solve_opts.scheme, "PROPOSED, CTP, UCC, FLC or NO_EVE");

  auto* replay_cmd = app.add_subcommand("replay", "Load a dumped scenario and solve it again");
  add_common(replay_cmd, replay_opts);
  replay_cmd->add_flag("--trace", replay_opts.trace, "Write sca_trace.csv and ao_trace.csv to --out");
  replay_cmd->add_option("--scenario", replay_opts.scenario_path, "Scenario file")->check(CLI::ExistingFile);
  replay_cmd->add_option("--scheme", replay_opts.scheme, "PROPOSED, CTP, UCC, FLC or NO_EVE");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte-Carlo parameter sweep");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--runs", sweep_opts.runs, "Monte-Carlo runs per point");

  auto* catalog_cmd = app.add_subcommand("catalog", "Print the workload catalog as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (catalog_flag || catalog_cmd->parsed()) {
      std::cout << catalog_csv();
      return kExitOk;
    }
    if (solve_cmd->parsed()) return run_solve(solve_opts, false);
    if (replay_cmd->parsed()) return run_solve(replay_opts, true);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_opts);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const InvalidConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownSchemeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NonConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << '\n' << format_report(e.report());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}
