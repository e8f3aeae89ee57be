#include "healing/commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "healing/error.hpp"
#include "healing/scenario.hpp"
#include "healing/simulator.hpp"
#include "healing/trace.hpp"
#include "json_util.hpp"

namespace healing {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("write to '" + path.string() + "' failed");
}

std::filesystem::path prepare_dir(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create '" + out_dir + "': " + ec.message());
  return dir;
}

Scenario load_with(const std::string& path, const RunOverrides& o) {
  Scenario s = load_scenario(path);
  if (o.seed) s.seed = *o.seed;
  if (o.charge_planning_time) s.charge_planning_time = *o.charge_planning_time;
  if (o.horizon) {
    s.planner.horizon = *o.horizon;
    s.planner.validate();
  }
  return s;
}

std::string join_lines(std::string_view header, const std::vector<std::string>& lines) {
  std::string out(header);
  out += '\n';
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

void summarize(std::ostream& out, const RewardReport& r) {
  out << r.planner << ": reward=" << format_number(r.reward) << " final_utility=" << format_number(r.final_utility)
      << " cycles=" << r.cycles << " applied=" << r.applied << " median_planning_ms="
      << format_number(r.median_planning_ms());
  if (!r.error.empty()) out << " error=\"" << r.error << '"';
  out << '\n';
}

}  // namespace

int cmd_run(const std::string& scenario_path, const std::string& planner, const std::string& out_dir,
            const RunOverrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    const PlannerKind kind = parse_planner_kind(planner);
    const Scenario scenario = load_with(scenario_path, overrides);
    const auto dir = prepare_dir(out_dir);
    const RunResult result = run(scenario, kind, scenario.planner);
    write_file(dir / "trace.csv", result.trace.to_csv());
    write_file(dir / "report.json", report_to_json_text(result.report));
    write_file(dir / "plan.log", join_lines(kPlanLogHeader, result.plan_log));
    write_file(dir / "issues.log", join_lines("cycle,event,issue,kind,element,utility_drop", result.issue_log));
    summarize(out, result.report);
    if (!result.report.error.empty()) {
      err << "run stopped early: " << result.report.error << '\n';
      return 3;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& planners,
                const std::string& out_dir, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err) {
  try {
    if (planners.size() < 2) throw ConfigError("compare needs at least two planners");
    std::vector<PlannerKind> kinds;
    for (const auto& p : planners) kinds.push_back(parse_planner_kind(p));
    const Scenario scenario = load_with(scenario_path, overrides);
    const auto dir = prepare_dir(out_dir);

    std::vector<RunResult> results;
    for (auto k : kinds) results.push_back(run(scenario, k, scenario.planner));

    std::string trace = "planner,time_ms,utility,event\n";
    detail::json reports = detail::json::array();
    for (const auto& r : results) {
      std::istringstream rows(r.trace.to_csv());
      std::string line;
      std::getline(rows, line);  // header
      while (std::getline(rows, line)) trace += r.report.planner + "," + line + "\n";
      reports.push_back(detail::json::parse(report_to_json_text(r.report)));
      summarize(out, r.report);
    }
    write_file(dir / "combined_trace.csv", trace);
    write_file(dir / "reports.json", reports.dump(2) + "\n");

    std::string table =
        "baseline,planner,baseline_reward,planner_reward,lost_reward,baseline_final_utility,planner_final_utility\n";
    for (std::size_t b = 0; b < results.size(); ++b) {
      for (std::size_t p = 0; p < results.size(); ++p) {
        if (b == p) continue;
        const auto& base = results[b].report;
        const auto& other = results[p].report;
        table += base.planner + "," + other.planner + "," + format_number(base.reward) + "," +
                 format_number(other.reward) + "," + format_number(lost_reward(base, other)) + "," +
                 format_number(base.final_utility) + "," + format_number(other.final_utility) + "\n";
        if (b < p) {
          out << "lost reward of " << other.planner << " vs " << base.planner << ": "
              << format_number(lost_reward(base, other)) << '\n';
        }
      }
    }
    write_file(dir / "lost_reward.csv", table);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_bench(const BenchOptions& options, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  try {
    if (options.min_repetitions < 1 || options.max_repetitions < options.min_repetitions) {
      throw ConfigError("repetitions must satisfy 1 <= min <= max");
    }
    const auto dir = prepare_dir(out_dir);
    const auto rows = run_bench(options, [&](const BenchRow& r) {
      out << r.shops << " shops, " << r.failures << " failures, " << planner_kind_name(r.planner) << ": median "
          << format_number(r.median_ms) << " ms over " << r.repetitions << " reps (" << r.status << ")\n";
    });
    write_file(dir / "bench.csv", bench_csv(rows));
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace healing
