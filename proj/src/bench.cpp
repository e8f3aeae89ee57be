#include "healing/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "healing/analyzer.hpp"
#include "healing/error.hpp"
#include "healing/patterns.hpp"
#include "healing/simulator.hpp"
#include "healing/trace.hpp"

namespace healing {

ArchitectureModel bench_fixture(const Catalog& catalog, int shops, int failures, std::uint64_t seed) {
  ArchitectureModel model = build_architecture(catalog, BuildOptions{shops, seed, 0.0});
  std::mt19937_64 rng(seed + 1);
  VirtualClock clock;
  constexpr IssueKind kinds[] = {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3};
  for (int i = 0; i < failures; ++i) {
    const auto& shop = model.shops()[static_cast<std::size_t>(i % shops)];
    const IssueKind kind = kinds[i % 3];
    std::vector<const Component*> pool;
    for (const auto& cid : shop.component_ids) {
      const auto& c = model.component(cid);
      if (is_healthy(model, c) && (kind != IssueKind::CF2 || !c.provided.empty())) pool.push_back(&c);
    }
    if (pool.empty()) throw ScenarioError("shop " + shop.id.str() + " has no healthy component left");
    Injection inj;
    inj.kind = kind;
    inj.target = {TargetPolicy::NamedComponent, pool[rng() % pool.size()]->id.str()};
    inject(model, inj, clock, rng);
  }
  const MatchSet matches = match_full(model);
  std::vector<Match> negatives;
  for (auto p : kAllPatterns) {
    if (polarity(p) == Polarity::Negative) {
      for (const auto& [key, m] : matches.of(p)) negatives.push_back(m);
    }
  }
  analyze(model, negatives, {}, model.annotations().issues, 0);
  return model;
}

double TimingStats::median() const {
  if (samples_ms.empty()) return 0.0;
  auto v = samples_ms;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double TimingStats::mean() const {
  if (samples_ms.empty()) return 0.0;
  return std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0) / static_cast<double>(samples_ms.size());
}

double TimingStats::stddev() const {
  if (samples_ms.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double x : samples_ms) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(samples_ms.size() - 1));
}

double TimingStats::rsd() const {
  const double m = mean();
  return m > 0.0 ? stddev() / m : 0.0;
}

std::string time_planner(PlannerKind planner, const ArchitectureModel& model, const PlannerConfig& config,
                         int min_reps, int max_reps, double max_rsd, double budget_ms, TimingStats& stats) {
  using clock = std::chrono::steady_clock;
  const auto open = model.annotations().issues.open();
  const auto begin = clock::now();
  while (true) {
    const auto t0 = clock::now();
    const Plan plan = make_plan(planner, model, open, config);
    const auto t1 = clock::now();
    (void)plan;
    stats.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    const int n = static_cast<int>(stats.samples_ms.size());
    if (n >= min_reps && stats.rsd() <= max_rsd) return "ok";
    if (n >= max_reps) return "cap";
    if (std::chrono::duration<double, std::milli>(t1 - begin).count() >= budget_ms) return "budget";
  }
}

std::vector<BenchRow> run_bench(const BenchOptions& options, const BenchProgress& progress) {
  std::vector<BenchRow> rows;
  for (int shops : options.shop_counts) {
    for (int failures : options.failure_counts) {
      if (!bench_cell_meaningful(shops, failures)) continue;
      const auto model = bench_fixture(options.catalog, shops, failures, options.seed);
      const int components = static_cast<int>(
          std::count_if(model.components().begin(), model.components().end(),
                        [](const auto& kv) { return kv.second.present() || !kv.second.replaced_by; }));
      for (auto planner : options.planners) {
        BenchRow row;
        row.shops = shops;
        row.components = components;
        row.failures = failures;
        row.planner = planner;
        TimingStats stats;
        try {
          row.status = time_planner(planner, model, options.config, options.min_repetitions,
                                    options.max_repetitions, options.max_rsd, options.cell_budget_ms, stats);
        } catch (const CapacityError&) {
          row.status = "capacity";
        } catch (const Error&) {
          row.status = "error";
        }
        row.median_ms = stats.median();
        row.mean_ms = stats.mean();
        row.stddev_ms = stats.stddev();
        row.rsd = stats.rsd();
        row.repetitions = static_cast<int>(stats.samples_ms.size());
        if (progress) progress(row);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.shops << ',' << r.components << ',' << r.failures << ',' << planner_kind_name(r.planner) << ','
        << format_number(r.median_ms) << ',' << format_number(r.mean_ms) << ',' << format_number(r.stddev_ms)
        << ',' << format_number(r.rsd) << ',' << r.repetitions << ',' << r.status << '\n';
  }
  return out.str();
}

}  // namespace healing
