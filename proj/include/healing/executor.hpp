#pragma once

#include <functional>
#include <string>
#include <vector>

#include "healing/change.hpp"
#include "healing/planner.hpp"
#include "healing/rules.hpp"

namespace healing {

/// Simulated time in milliseconds.
class VirtualClock {
 public:
  explicit VirtualClock(double now_ms = 0.0);
  double now() const { return now_; }
  void advance(double ms);
  void advance_to(double t_ms);

 private:
  double now_ = 0.0;
};

enum class ExecutionStatus : std::uint8_t { Applied, Stale, Failed };

std::string_view execution_status_name(ExecutionStatus s);

struct ExecutionOutcome {
  ExecutionStatus status = ExecutionStatus::Applied;
  RuleApplication application;
  ChangeDelta delta;  // empty unless applied
  double completed_at_ms = 0.0;
  std::string message;
};

/// The model event that realizes a rule application.
ChangeEvent rule_event(const ArchitectureModel& model, const RuleApplication& app);

/// Re-checks the match, applies the rule, advances the clock by the cost and
/// drops the issue and its planned-rule annotation. A stale match yields a
/// Stale outcome with the clock untouched; execution errors yield Failed.
ExecutionOutcome execute_application(ArchitectureModel& model, const RuleApplication& app,
                                     VirtualClock& clock);

using ExecutionCallback = std::function<void(const ExecutionOutcome&)>;

/// Executes in order, continuing past stale or failed applications.
std::vector<ExecutionOutcome> execute_plan(ArchitectureModel& model, const Plan& plan,
                                           VirtualClock& clock,
                                           const ExecutionCallback& on_step = {});

}  // namespace healing
