#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "healing/change.hpp"
#include "healing/executor.hpp"
#include "healing/model.hpp"
#include "healing/planner.hpp"
#include "healing/scenario.hpp"
#include "healing/trace.hpp"

namespace healing {

struct RewardReport {
  std::string planner;
  double reward = 0.0;  // utility × ms over [0, duration]
  double initial_utility = 0.0;
  double final_utility = 0.0;
  double duration_ms = 0.0;
  std::vector<double> planning_ms;  // wall time per cycle
  int cycles = 0;
  int injections = 0;
  int applied = 0;
  int stale = 0;
  int failed = 0;
  int not_started = 0;  // would have completed after the duration
  std::size_t open_issues_at_end = 0;
  std::string error;    // set when the run stopped early

  double median_planning_ms() const;
  double total_planning_ms() const;
};

/// Reward the run lost against a baseline run.
inline double lost_reward(const RewardReport& baseline, const RewardReport& run) {
  return baseline.reward - run.reward;
}

std::string report_to_json_text(const RewardReport& report);

struct RunResult {
  Trace trace;
  RewardReport report;
  std::vector<std::string> plan_log;   // plan_log_line rows
  std::vector<std::string> issue_log;  // issue_log_line rows
  ArchitectureModel final_model;
};

/// Components that can take a fresh fault without overlapping an open issue.
bool is_healthy(const ArchitectureModel& model, const Component& c);

/// Applies one scripted fault. Throws ScenarioError when no target resolves
/// and TransitionError when the named target cannot take the fault.
ChangeDelta inject(ArchitectureModel& model, const Injection& injection, const VirtualClock& clock,
                   std::mt19937_64& rng);

/// The closed MAPE loop for one planner. `charge_planning_time` overrides the
/// scenario setting when given.
RunResult run(const Scenario& scenario, PlannerKind planner, const PlannerConfig& config,
              std::optional<bool> charge_planning_time = std::nullopt);
RunResult run(const Scenario& scenario, PlannerKind planner);

/// The model a scenario starts from.
ArchitectureModel initial_model(const Scenario& scenario);

}  // namespace healing
