#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "healing/catalog.hpp"
#include "healing/issue.hpp"
#include "healing/planner.hpp"

namespace healing {

enum class TargetPolicy : std::uint8_t { RandomComponent, NamedComponent, RandomShop };

std::string_view target_policy_name(TargetPolicy p);
TargetPolicy parse_target_policy(std::string_view name);

struct InjectionTarget {
  TargetPolicy policy = TargetPolicy::RandomComponent;
  std::string element;  // component id, or connector id for a named CF4
};

struct Injection {
  double time_ms = 0.0;
  IssueKind kind = IssueKind::CF1;
  InjectionTarget target;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  int shops = 1;
  double duration_ms = 1000.0;
  Catalog catalog;
  double criticality_jitter = 0.0;
  PlannerConfig planner = PlannerConfig::defaults();
  bool charge_planning_time = false;
  double reward_horizon_ms = 0.0;  // oracle tie-break window; 0 = automatic
  std::vector<Injection> injections;

  /// Throws ScenarioError.
  void validate() const;
};

/// `base_dir` resolves a relative "catalog" path.
Scenario parse_scenario(std::string_view json_text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

}  // namespace healing
