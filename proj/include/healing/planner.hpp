#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "healing/issue.hpp"
#include "healing/model.hpp"
#include "healing/rules.hpp"

namespace healing {

enum class PlannerKind : std::uint8_t { Static, UDriven, Oracle };

std::string_view planner_kind_name(PlannerKind kind);
/// Accepts "static", "udriven", "oracle"; throws ConfigError listing them otherwise.
PlannerKind parse_planner_kind(std::string_view name);

/// Execution time of a rule: a base per rule kind plus an optional charge
/// per connector attached to the target component.
struct CostModel {
  std::map<RuleKind, double> base_ms;
  double per_connector_ms = 0.0;

  double base(RuleKind rule) const;
  double cost(RuleKind rule, const ArchitectureModel& model, const std::string& target) const;
};

struct PlannerConfig {
  int horizon = 1;  // applications executed per MAPE cycle
  CostModel costs;
  std::map<IssueKind, std::vector<RuleKind>> applicability;
  // Static planner: issue kinds in priority order and one fixed rule per kind,
  // with design-time utility estimates used only as labels.
  std::vector<IssueKind> static_order;
  std::map<IssueKind, RuleKind> static_rule;
  std::map<IssueKind, double> static_estimate;
  // Oracle limits.
  std::size_t oracle_issue_bound = 8;       // open issues per shop
  std::size_t oracle_candidate_bound = 6;   // rules per issue
  std::size_t oracle_permutation_limit = 6;
  std::size_t oracle_sequence_cap = 5000;

  static PlannerConfig defaults();
  /// Throws ConfigError.
  void validate() const;
};

struct Plan {
  PlannerKind kind = PlannerKind::UDriven;
  int horizon = 1;
  std::vector<RuleApplication> applications;

  bool empty() const { return applications.empty(); }
  std::size_t size() const { return applications.size(); }
};

/// One application per applicable rule kind, with fresh impact and cost.
/// Replace is skipped when the type has no alternative. Throws PlanningError
/// when nothing applies.
std::vector<RuleApplication> enumerate_rules(const ArchitectureModel& model, const Issue& issue,
                                             const PlannerConfig& config);

/// Max utility increase, then min cost, then rule order.
RuleApplication select_best(const std::vector<RuleApplication>& applications);

/// Sort by utility increase / cost, non-increasing; ties by larger increase,
/// then by issue detection order.
Plan order_plan(std::vector<RuleApplication> selected, PlannerKind kind = PlannerKind::UDriven,
                int horizon = 1);

/// Fixed priorities and rules; never computes impacts.
Plan plan_static(const ArchitectureModel& model, const std::vector<Issue>& open_issues,
                 const PlannerConfig& config);

/// enumerate → select → order, truncated to the horizon.
Plan plan_udriven(const ArchitectureModel& model, const std::vector<Issue>& open_issues,
                  const PlannerConfig& config);

/// Exhaustive search maximizing final utility, ties broken by reward over
/// `reward_horizon_ms` (0 means: the longest candidate sequence's duration).
/// Throws CapacityError above the configured bounds.
Plan plan_oracle(const ArchitectureModel& model, const std::vector<Issue>& open_issues,
                 const PlannerConfig& config, double reward_horizon_ms = 0.0);

Plan make_plan(PlannerKind kind, const ArchitectureModel& model,
               const std::vector<Issue>& open_issues, const PlannerConfig& config,
               double reward_horizon_ms = 0.0);

/// Reward of completing gains in order, starting from `start_utility` at
/// time 0, integrated up to `horizon_ms`.
double sequence_reward(double start_utility, const std::vector<RuleApplication>& sequence,
                       double horizon_ms);

/// "<cycle>,<planner>,<rule>,<issue>,<kind>,<target>,<utility increase>,<cost>,<ratio>"
std::string plan_log_line(int cycle, PlannerKind kind, const RuleApplication& app);
inline constexpr std::string_view kPlanLogHeader =
    "cycle,planner,rule,issue,kind,target,utility_increase,cost_ms,ratio";

}  // namespace healing
