#include "healing/executor.hpp"

#include <cmath>

#include "healing/error.hpp"
#include "healing/patterns.hpp"

namespace healing {

VirtualClock::VirtualClock(double now_ms) : now_(now_ms) {
  if (!(now_ms >= 0.0)) throw ExecutionError("clock cannot start before 0");
}

void VirtualClock::advance(double ms) {
  if (!(ms >= 0.0) || !std::isfinite(ms)) throw ExecutionError("clock can only move forward");
  now_ += ms;
}

void VirtualClock::advance_to(double t_ms) {
  if (t_ms > now_) now_ = t_ms;
}

std::string_view execution_status_name(ExecutionStatus s) {
  switch (s) {
    case ExecutionStatus::Applied: return "applied";
    case ExecutionStatus::Stale: return "stale";
    case ExecutionStatus::Failed: return "failed";
  }
  return "?";
}

ChangeEvent rule_event(const ArchitectureModel& model, const RuleApplication& app) {
  const ComponentId target(app.target);
  switch (app.rule) {
    case RuleKind::Restart: return RestartComponent{target};
    case RuleKind::LwRedeploy: return RedeployComponent{target, false};
    case RuleKind::HwRedeploy: return RedeployComponent{target, true};
    case RuleKind::Replace: {
      std::string type = app.replacement_type;
      if (type.empty()) {
        const auto* alt = model.catalog().best_alternative(model.component(target).type_name);
        if (alt == nullptr) throw ExecutionError("no alternative type to replace '" + app.target + "'");
        type = alt->name;
      }
      return ReplaceComponent{target, type};
    }
    case RuleKind::RecreateConnector: return RecreateConnector{ConnectorId(app.target)};
  }
  throw ExecutionError("unknown rule kind");
}

ExecutionOutcome execute_application(ArchitectureModel& model, const RuleApplication& app,
                                     VirtualClock& clock) {
  ExecutionOutcome out;
  out.application = app;
  out.completed_at_ms = clock.now();
  if (!match_still_valid(model, app.match)) {
    out.status = ExecutionStatus::Stale;
    out.message = std::string(pattern_name(app.match.pattern)) + " '" + app.match.key + "' no longer holds";
    return out;
  }
  try {
    out.delta = apply_change(model, rule_event(model, app));
  } catch (const Error& e) {
    out.status = ExecutionStatus::Failed;
    out.message = e.what();
    return out;
  }
  clock.advance(app.cost_ms);
  out.completed_at_ms = clock.now();
  model.annotations().issues.close(app.issue_id);
  model.annotations().drop_planned(app.issue_id);
  return out;
}

std::vector<ExecutionOutcome> execute_plan(ArchitectureModel& model, const Plan& plan,
                                           VirtualClock& clock, const ExecutionCallback& on_step) {
  std::vector<ExecutionOutcome> outcomes;
  outcomes.reserve(plan.applications.size());
  for (const auto& app : plan.applications) {
    outcomes.push_back(execute_application(model, app, clock));
    if (on_step) on_step(outcomes.back());
  }
  return outcomes;
}

}  // namespace healing
