#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "healing/catalog.hpp"
#include "healing/model.hpp"
#include "healing/planner.hpp"

namespace healing {

struct BenchOptions {
  std::vector<int> shop_counts{1, 10, 100, 1000};
  std::vector<int> failure_counts{1, 10, 100, 1000};
  std::vector<PlannerKind> planners{PlannerKind::Static, PlannerKind::UDriven, PlannerKind::Oracle};
  int min_repetitions = 300;
  int max_repetitions = 1000;
  double max_rsd = 0.05;
  double cell_budget_ms = 5000.0;  // wall time per (cell, planner) after which timing stops
  std::uint64_t seed = 1;
  Catalog catalog = default_catalog();
  PlannerConfig config = PlannerConfig::defaults();
};

struct BenchRow {
  int shops = 0;
  int components = 0;
  int failures = 0;
  PlannerKind planner = PlannerKind::UDriven;
  double median_ms = 0.0;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  double rsd = 0.0;
  int repetitions = 0;
  std::string status;  // ok | cap | budget | capacity | error
};

/// Small architectures do not get more than ten failures per shop.
inline bool bench_cell_meaningful(int shops, int failures) {
  return shops > 0 && failures > 0 && failures <= 10 * shops;
}

/// A model of `shops` shops with `failures` analyzed issues: CF1, CF2 and
/// CF3 in turn, spread round-robin over the shops.
ArchitectureModel bench_fixture(const Catalog& catalog, int shops, int failures, std::uint64_t seed);

struct TimingStats {
  std::vector<double> samples_ms;
  double median() const;
  double mean() const;
  double stddev() const;  // sample standard deviation
  double rsd() const;
};

/// Times repeated planning calls on a fixed model until the relative standard
/// deviation reaches `max_rsd` (after `min_reps`), `max_reps`, or the budget.
/// Returns the stop reason.
std::string time_planner(PlannerKind planner, const ArchitectureModel& model, const PlannerConfig& config,
                         int min_reps, int max_reps, double max_rsd, double budget_ms, TimingStats& stats);

using BenchProgress = std::function<void(const BenchRow&)>;

std::vector<BenchRow> run_bench(const BenchOptions& options, const BenchProgress& progress = {});

inline constexpr std::string_view kBenchCsvHeader =
    "shops,components,failures,planner,median_ms,mean_ms,stddev_ms,rsd,repetitions,status";
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace healing
