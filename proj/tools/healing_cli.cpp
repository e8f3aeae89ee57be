#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "healing/catalog.hpp"
#include "healing/commands.hpp"
#include "healing/error.hpp"
#include "healing/planner.hpp"

namespace {

void add_overrides(CLI::App* cmd, healing::RunOverrides& o) {
  cmd->add_option("--seed", o.seed, "Override the scenario seed");
  cmd->add_option("--charge-planning-time", o.charge_planning_time,
                  "Advance the virtual clock by measured planning time (true/false)");
  cmd->add_option("--horizon", o.horizon, "Applications executed per MAPE cycle")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utility-driven self-healing simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string planner = "udriven";
  std::string out_dir = "out";
  healing::RunOverrides overrides;

  auto* run = app.add_subcommand("run", "Run one planner on a scenario");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--planner", planner, "static, udriven or oracle");
  run->add_option("--out", out_dir, "Output directory");
  add_overrides(run, overrides);

  std::vector<std::string> planners{"static", "udriven"};
  auto* compare = app.add_subcommand("compare", "Run several planners on the same scenario");
  compare->add_option("--scenario", scenario, "Scenario JSON file")->required();
  compare->add_option("--planner", planners, "Planners to compare")->delimiter(',');
  compare->add_option("--out", out_dir, "Output directory");
  add_overrides(compare, overrides);

  healing::BenchOptions bench_options;
  std::vector<std::string> bench_planners{"static", "udriven", "oracle"};
  auto* bench = app.add_subcommand("bench", "Planning-time benchmark matrix");
  bench->add_option("--shops", bench_options.shop_counts, "Shop counts")->delimiter(',');
  bench->add_option("--failures", bench_options.failure_counts, "Failure counts")->delimiter(',');
  bench->add_option("--planner", bench_planners, "Planners to time")->delimiter(',');
  bench->add_option("--repetitions", bench_options.min_repetitions, "Minimum repetitions per cell");
  bench->add_option("--max-repetitions", bench_options.max_repetitions, "Repetition cap per cell");
  bench->add_option("--max-rsd", bench_options.max_rsd, "Target relative standard deviation");
  bench->add_option("--budget-ms", bench_options.cell_budget_ms, "Wall-time budget per cell and planner");
  bench->add_option("--seed", bench_options.seed, "Fixture seed");
  bench->add_option("--out", out_dir, "Output directory");

  auto* catalog = app.add_subcommand("catalog", "Print the built-in catalog as JSON");
  catalog->group("");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return healing::cmd_run(scenario, planner, out_dir, overrides, std::cout, std::cerr);
  if (compare->parsed()) {
    return healing::cmd_compare(scenario, planners, out_dir, overrides, std::cout, std::cerr);
  }
  if (bench->parsed()) {
    try {
      bench_options.planners.clear();
      for (const auto& p : bench_planners) bench_options.planners.push_back(healing::parse_planner_kind(p));
    } catch (const healing::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    return healing::cmd_bench(bench_options, out_dir, std::cout, std::cerr);
  }
  if (catalog->parsed()) {
    std::cout << healing::catalog_to_json_text(healing::default_catalog());
    return 0;
  }
  return 1;
}
