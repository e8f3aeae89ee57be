#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "healing/bench.hpp"

namespace healing {

/// Command-line overrides applied on top of the scenario file.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<bool> charge_planning_time;
  std::optional<int> horizon;
};

/// Writes trace.csv, report.json, plan.log and issues.log to `out_dir`.
int cmd_run(const std::string& scenario_path, const std::string& planner, const std::string& out_dir,
            const RunOverrides& overrides, std::ostream& out, std::ostream& err);

/// Runs every planner on the same scenario; writes combined_trace.csv,
/// lost_reward.csv and reports.json to `out_dir`.
int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& planners,
                const std::string& out_dir, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err);

/// Writes bench.csv to `out_dir`.
int cmd_bench(const BenchOptions& options, const std::string& out_dir, std::ostream& out, std::ostream& err);

}  // namespace healing
