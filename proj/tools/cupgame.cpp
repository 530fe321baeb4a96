#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cupgame/emptiers.hpp"
#include "cupgame/harness.hpp"
#include "cupgame/stones.hpp"
#include "cupgame/trace_io.hpp"

using namespace cupgame;
using namespace cupgame::harness;

namespace {

std::vector<Rational> parse_fills(const std::string& text) {
  std::vector<Rational> fills;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) fills.push_back(Rational::parse(item));
  }
  if (fills.empty()) throw std::invalid_argument("--fills needs at least one value");
  return fills;
}

// "lo:hi" or "lo:hi:per_octave"
std::vector<std::int64_t> parse_range(const std::string& text) {
  std::vector<std::int64_t> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stoll(item));
  if (parts.size() < 2 || parts.size() > 3 || parts[0] < 1 || parts[1] < parts[0])
    throw std::invalid_argument("--t-range expects lo:hi[:per_octave] with 1 <= lo <= hi");
  return log_spaced(parts[0], parts[1], parts.size() == 3 ? parts[2] : 1);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

int cmd_simulate(const std::string& path) {
  ExperimentConfig cfg = load_config(path);
  apply_env_overrides(cfg);
  GameTrace trace;
  EnvelopeMonitor monitor;
  RunSummary summary = run_experiment(cfg, cfg.seed, &monitor, &trace);
  if (!cfg.trace_json.empty()) open_out(cfg.trace_json) << trace_to_json(trace).dump(1) << "\n";
  if (!cfg.backlog_csv.empty()) {
    auto f = open_out(cfg.backlog_csv);
    write_backlog_csv(f, trace);
  }
  json out = summary.to_json();
  out["build"] = build_id();
  out["config_hash"] = hex64(config_hash(cfg.document));
  std::cout << out.dump(2) << "\n";
  return summary.conservation_violations == 0 && summary.envelope_violations == 0 ? 0 : 3;
}

int cmd_sweep(const std::string& path, const std::string& out_path) {
  ExperimentConfig cfg = load_config(path);
  apply_env_overrides(cfg);
  std::string target = out_path.empty() ? cfg.sweep_csv : out_path;
  EnvelopeMonitor monitor;
  std::vector<SweepRow> rows;
  if (target.empty() || target == "-") {
    rows = run_sweep(cfg, std::cout, &monitor);
  } else {
    auto f = open_out(target);
    rows = run_sweep(cfg, f, &monitor);
  }
  std::int64_t failed = 0;
  for (const auto& r : rows) failed += !r.ok;
  std::cerr << rows.size() << " rows, " << failed << " failed, " << monitor.violation_count()
            << " envelope violations\n";
  return failed == 0 && monitor.violation_count() == 0 ? 0 : 3;
}

int cmd_verify(const std::string& suite, SuiteOptions options) {
  EnvelopeMonitor monitor;
  options.monitor = &monitor;
  SuiteReport report = run_suite(suite, options);
  json out = report.to_json();
  out["envelope"] = {{"checks", monitor.checks()}, {"violations", monitor.violation_count()},
                     {"examples", monitor.examples()}};
  std::cout << out.dump(2) << "\n";
  return report.passed() && monitor.violation_count() == 0 ? 0 : 1;
}

int cmd_curve(std::int64_t n, const std::string& range, const std::string& out_path) {
  if (n < 2) throw std::invalid_argument("--n must be at least 2");
  EnvelopeMonitor monitor;
  auto points = run_curve(n, parse_range(range), &monitor);
  if (out_path.empty() || out_path == "-") {
    write_curve_csv(std::cout, n, points);
  } else {
    auto f = open_out(out_path);
    write_curve_csv(f, n, points);
  }
  if (monitor.violation_count() > 0) {
    std::cerr << monitor.violation_count() << " envelope violations, e.g. " << monitor.examples().front() << "\n";
    return 3;
  }
  return 0;
}

int cmd_oracle(const std::string& fills, const std::string& variant, const std::optional<std::string>& eps,
               std::int64_t horizon, const std::string& grid, std::int64_t max_nodes) {
  std::optional<Rational> epsilon;
  if (eps) epsilon = Rational::parse(*eps);
  CupState start(parse_fills(fills), GameVariant::parse(variant, epsilon));
  OracleConfig cfg;
  cfg.horizon = horizon;
  cfg.grid = Rational::parse(grid);
  cfg.max_nodes = max_nodes;
  OracleLine free = opt_oracle_line(start, cfg, OracleEmptier::Free);
  OracleLine greedy = opt_oracle_line(start, cfg, OracleEmptier::Greedy);
  json out{{"state", start.str()},
           {"variant", start.variant().name()},
           {"horizon", horizon},
           {"grid", cfg.grid.str()},
           {"free_value", rational_json(free.value)},
           {"greedy_value", rational_json(greedy.value)},
           {"equal", free.value == greedy.value},
           {"nodes", free.nodes + greedy.nodes}};
  if (horizon > 0) {
    json adds = json::array();
    for (const auto& a : free.first_move.additions()) adds.push_back(a.str());
    out["best_first_move"] = {{"p", free.first_move.p()}, {"additions", adds}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-processor cup game simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  auto* simulate = app.add_subcommand("simulate", "play one game from a config file");
  simulate->add_option("config", config_path, "JSON config")->required();

  auto* sweep = app.add_subcommand("sweep", "run the cross product of a config's sweep ranges");
  sweep->add_option("config", config_path, "JSON config")->required();
  sweep->add_option("-o,--out", out_path, "CSV path (default: outputs.sweep_csv or stdout)");

  std::string suite;
  SuiteOptions suite_options;
  std::uint64_t case_seed = 0;
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", suite_options.seed, "base seed");
  verify->add_option("--cases", suite_options.cases, "case count (0 = suite default)");
  auto* case_opt = verify->add_option("--case-seed", case_seed, "replay one case");
  verify->add_flag("--inject-failure", suite_options.inject_failure, "record a deliberate violation");

  std::int64_t curve_n = 256;
  std::string t_range = "16:1048576";
  auto* curve = app.add_subcommand("curve", "best measured backlog against the b(t) formula");
  curve->add_option("--n", curve_n, "cups")->required();
  curve->add_option("--t-range", t_range, "lo:hi[:per_octave], log spaced");
  curve->add_option("-o,--out", out_path, "CSV path (default stdout)");

  std::string fills, variant = "negative_fill", grid = "1/2";
  std::optional<std::string> eps;
  std::int64_t horizon = 1, max_nodes = 5'000'000;
  auto* oracle = app.add_subcommand("oracle", "exact game value on a tiny instance");
  oracle->add_option("--fills", fills, "comma separated, e.g. 0,1/2,1")->required();
  oracle->add_option("--variant", variant, "standard | negative_fill | augmented");
  oracle->add_option("--epsilon", eps, "augmentation for the augmented variant");
  oracle->add_option("--horizon", horizon, "rounds")->check(CLI::NonNegativeNumber);
  oracle->add_option("--grid", grid, "filler move grid");
  oracle->add_option("--max-nodes", max_nodes, "search budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config_path);
    if (*sweep) return cmd_sweep(config_path, out_path);
    if (*verify) {
      if (*case_opt) suite_options.case_seed = case_seed;
      return cmd_verify(suite, suite_options);
    }
    if (*curve) return cmd_curve(curve_n, t_range, out_path);
    if (*oracle) return cmd_oracle(fills, variant, eps, horizon, grid, max_nodes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
