#include "healing/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "healing/analyzer.hpp"
#include "healing/error.hpp"
#include "healing/patterns.hpp"
#include "healing/utility.hpp"
#include "json_util.hpp"

namespace healing {

double RewardReport::median_planning_ms() const {
  if (planning_ms.empty()) return 0.0;
  auto v = planning_ms;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  if (v.size() % 2 == 1) return v[mid];
  const double hi = v[mid];
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

double RewardReport::total_planning_ms() const {
  return std::accumulate(planning_ms.begin(), planning_ms.end(), 0.0);
}

std::string report_to_json_text(const RewardReport& r) {
  detail::json j;
  j["planner"] = r.planner;
  j["reward"] = r.reward;
  j["initial_utility"] = r.initial_utility;
  j["final_utility"] = r.final_utility;
  j["duration_ms"] = r.duration_ms;
  j["cycles"] = r.cycles;
  j["injections"] = r.injections;
  j["applied"] = r.applied;
  j["stale"] = r.stale;
  j["failed"] = r.failed;
  j["not_started"] = r.not_started;
  j["open_issues_at_end"] = r.open_issues_at_end;
  j["planning_ms"] = r.planning_ms;
  j["median_planning_ms"] = r.median_planning_ms();
  j["total_planning_ms"] = r.total_planning_ms();
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2) + "\n";
}

bool is_healthy(const ArchitectureModel& model, const Component& c) {
  if (c.state != ComponentState::Started || c.max_failure_count() > kFailureThreshold) return false;
  for (const auto& kid : model.attached(c.id)) {
    if (model.connector(kid).state == ConnectorState::Crashed) return false;
  }
  return true;
}

namespace {

bool connector_eligible(const ArchitectureModel& model, const Connector& k) {
  return k.state == ConnectorState::Ok && is_healthy(model, model.component(k.required_side)) &&
         is_healthy(model, model.component(k.provided_side));
}

bool component_eligible(const ArchitectureModel& model, const Component& c, IssueKind kind) {
  return is_healthy(model, c) && (kind != IssueKind::CF2 || !c.provided.empty());
}

template <class T>
const T& pick(std::vector<const T*>& pool, std::mt19937_64& rng) {
  return *pool[rng() % pool.size()];
}

ChangeEvent fault_on(const Component& c, IssueKind kind) {
  switch (kind) {
    case IssueKind::CF1: return CrashComponent{c.id};
    case IssueKind::CF2: {
      if (c.provided.empty()) throw ScenarioError("'" + c.id.str() + "' provides no interface to fail");
      const auto& p = c.provided.front();
      const int needed = kFailureThreshold + 1 - p.failure_count;
      if (needed < 1) throw TransitionError("'" + c.id.str() + "' is already failing");
      return RecordFailure{c.id, p.interface_type, needed};
    }
    case IssueKind::CF3: return RemoveComponent{c.id};
    case IssueKind::CF4: break;
  }
  throw ScenarioError("connector fault on a component");
}

}  // namespace

ChangeDelta inject(ArchitectureModel& model, const Injection& inj, const VirtualClock& clock,
                   std::mt19937_64& rng) {
  if (clock.now() < inj.time_ms) throw ScenarioError("injection is not due yet");
  const std::string what = std::string(issue_kind_name(inj.kind)) + " injection";

  if (inj.target.policy == TargetPolicy::NamedComponent) {
    if (inj.kind == IssueKind::CF4) {
      ConnectorId kid(inj.target.element);
      if (model.find_connector(kid) == nullptr) {
        const auto* c = model.find_component(ComponentId(inj.target.element));
        if (c == nullptr) throw ScenarioError(what + ": no element '" + inj.target.element + "'");
        const auto& attached = model.attached(c->id);
        auto it = std::find_if(attached.begin(), attached.end(), [&](const ConnectorId& id) {
          return model.connector(id).state == ConnectorState::Ok;
        });
        if (it == attached.end()) throw ScenarioError(what + ": '" + c->id.str() + "' has no working connector");
        kid = *it;
      }
      return apply_change(model, CrashConnector{kid});
    }
    const auto* c = model.find_component(ComponentId(inj.target.element));
    if (c == nullptr) throw ScenarioError(what + ": no component '" + inj.target.element + "'");
    return apply_change(model, fault_on(*c, inj.kind));
  }

  // Random policies draw from healthy elements only, so injected faults do
  // not stack on an element that already has an open issue.
  std::vector<const ShopId*> shops;
  if (inj.target.policy == TargetPolicy::RandomShop) {
    for (const auto& s : model.shops()) shops.push_back(&s.id);
  }
  // For randomShop, shops are tried in a seeded random order until one has a target.
  std::vector<const ShopId*> order = shops.empty() ? std::vector<const ShopId*>{nullptr} : shops;
  if (!shops.empty()) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  }
  for (const auto* only : order) {
    if (inj.kind == IssueKind::CF4) {
      std::vector<const Connector*> pool;
      if (only) {
        for (const auto& cid : model.shop(*only).component_ids) {
          for (const auto& kid : model.attached(cid)) {
            const auto& k = model.connector(kid);
            if (k.required_side == cid && connector_eligible(model, k)) pool.push_back(&k);
          }
        }
      } else {
        for (const auto& [id, k] : model.connectors()) {
          if (connector_eligible(model, k)) pool.push_back(&k);
        }
      }
      if (!pool.empty()) return apply_change(model, CrashConnector{pick(pool, rng).id});
    } else {
      std::vector<const Component*> pool;
      if (only) {
        for (const auto& cid : model.shop(*only).component_ids) {
          const auto& c = model.component(cid);
          if (component_eligible(model, c, inj.kind)) pool.push_back(&c);
        }
      } else {
        for (const auto& [id, c] : model.components()) {
          if (component_eligible(model, c, inj.kind)) pool.push_back(&c);
        }
      }
      if (!pool.empty()) return apply_change(model, fault_on(pick(pool, rng), inj.kind));
    }
  }
  throw ScenarioError(what + ": no healthy target left");
}

ArchitectureModel initial_model(const Scenario& scenario) {
  return build_architecture(scenario.catalog,
                            BuildOptions{scenario.shops, scenario.seed, scenario.criticality_jitter});
}

RunResult run(const Scenario& scenario, PlannerKind planner, const PlannerConfig& config,
              std::optional<bool> charge_planning_time) {
  const bool charge = charge_planning_time.value_or(scenario.charge_planning_time);
  const double duration = scenario.duration_ms;

  RunResult result;
  auto& report = result.report;
  auto& trace = result.trace;
  report.planner = std::string(planner_kind_name(planner));
  report.duration_ms = duration;

  ArchitectureModel model = initial_model(scenario);
  MatchSet matches = match_full(model);
  UtilityLedger ledger;
  total_utility(model, matches, &ledger);
  report.initial_utility = ledger.total();

  std::mt19937_64 rng(scenario.seed + 1);
  VirtualClock clock;
  auto& registry = model.annotations().issues;
  int cycle = 0;

  {
    std::vector<Match> negatives;
    for (auto p : kAllPatterns) {
      if (polarity(p) == Polarity::Negative) {
        for (const auto& [key, m] : matches.of(p)) negatives.push_back(m);
      }
    }
    for (const auto& i : analyze(model, negatives, {}, registry, cycle).created) {
      result.issue_log.push_back(issue_log_line(i, true, cycle));
    }
  }
  trace.record(0.0, ledger.total(), "start");

  // Monitor → analyze on one delta.
  auto process = [&](const ChangeDelta& delta, const std::string& tag) {
    const auto md = match_delta(model, delta, matches);
    utility_delta(ledger, md.invalidated, md.added, model);
    matches.apply(md);
    const auto found = analyze(model, md.added, md.invalidated, registry, cycle);
    for (const auto& i : found.closed) result.issue_log.push_back(issue_log_line(i, false, cycle));
    for (const auto& i : found.created) result.issue_log.push_back(issue_log_line(i, true, cycle));
    trace.record(clock.now(), ledger.total(), tag);
  };

  const auto& injections = scenario.injections;
  std::size_t next = 0;
  while (clock.now() < duration) {
    while (next < injections.size() && injections[next].time_ms <= clock.now()) {
      const auto& inj = injections[next++];
      ChangeDelta delta;
      try {
        delta = inject(model, inj, clock, rng);
      } catch (const Error& e) {
        report.error = e.what();
        break;
      }
      ++report.injections;
      std::string target = delta.empty() ? std::string() : delta.changes.front().element_id();
      for (const auto& c : delta.changes) {
        if (c.component()) target = c.element_id();
      }
      process(delta, "inject:" + std::string(issue_kind_name(inj.kind)) + ":" + target);
    }

    if (!report.error.empty()) break;

    auto open = registry.open();
    if (open.empty()) {
      if (next < injections.size()) {
        clock.advance_to(injections[next].time_ms);
        continue;
      }
      break;
    }

    ++cycle;
    Plan plan;
    const auto started = std::chrono::steady_clock::now();
    try {
      plan = make_plan(planner, model, open, config, scenario.reward_horizon_ms);
    } catch (const Error& e) {
      report.error = e.what();
      break;
    }
    const double planning =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    report.planning_ms.push_back(planning);
    ++report.cycles;
    for (const auto& app : plan.applications) result.plan_log.push_back(plan_log_line(cycle, planner, app));
    if (charge) {
      clock.advance(planning);
      if (clock.now() >= duration) break;
    }

    bool progressed = false;
    const std::size_t k = std::min(plan.applications.size(), static_cast<std::size_t>(config.horizon));
    for (std::size_t i = 0; i < k; ++i) {
      const auto& app = plan.applications[i];
      if (clock.now() + app.cost_ms > duration) {
        report.not_started += static_cast<int>(k - i);
        break;
      }
      model.annotations().planned.push_back({app.issue_id, app.rule, cycle});
      const Issue* scheduled = registry.find(app.issue_id);
      const std::optional<Issue> issue = scheduled ? std::optional<Issue>(*scheduled) : std::nullopt;
      auto outcome = execute_application(model, app, clock);
      switch (outcome.status) {
        case ExecutionStatus::Applied:
          ++report.applied;
          progressed = true;
          if (issue && !registry.find(issue->id)) result.issue_log.push_back(issue_log_line(*issue, false, cycle));
          process(outcome.delta, "apply:" + std::string(rule_kind_name(app.rule)) + ":" + app.issue_id);
          break;
        case ExecutionStatus::Stale:
          ++report.stale;
          model.annotations().drop_planned(app.issue_id);
          trace.record(clock.now(), ledger.total(), "stale:" + app.issue_id);
          break;
        case ExecutionStatus::Failed:
          ++report.failed;
          model.annotations().drop_planned(app.issue_id);
          trace.record(clock.now(), ledger.total(), "failed:" + app.issue_id);
          break;
      }
    }
    if (!progressed) {
      // Re-planning now would produce the same plan; wait for the next fault.
      if (next < injections.size()) {
        clock.advance_to(injections[next].time_ms);
        continue;
      }
      break;
    }
  }

  trace.close(duration);
  report.reward = trace.reward(0.0, duration);
  report.final_utility = ledger.total();
  report.open_issues_at_end = registry.size();
  result.final_model = std::move(model);
  return result;
}

RunResult run(const Scenario& scenario, PlannerKind planner) {
  return run(scenario, planner, scenario.planner);
}

}  // namespace healing
