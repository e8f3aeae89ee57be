#include "healing/planner.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "healing/error.hpp"
#include "healing/utility.hpp"

namespace healing {

std::string_view planner_kind_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Static: return "static";
    case PlannerKind::UDriven: return "udriven";
    case PlannerKind::Oracle: return "oracle";
  }
  return "?";
}

PlannerKind parse_planner_kind(std::string_view name) {
  for (auto k : {PlannerKind::Static, PlannerKind::UDriven, PlannerKind::Oracle}) {
    if (planner_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown planner '" + std::string(name) + "' (valid: static, udriven, oracle)");
}

double CostModel::base(RuleKind rule) const {
  auto it = base_ms.find(rule);
  if (it == base_ms.end()) {
    throw ConfigError("no cost configured for rule " + std::string(rule_kind_name(rule)));
  }
  return it->second;
}

double CostModel::cost(RuleKind rule, const ArchitectureModel& model, const std::string& target) const {
  double c = base(rule);
  if (per_connector_ms != 0.0 && rule != RuleKind::RecreateConnector) {
    if (const auto* comp = model.find_component(ComponentId(target))) {
      const int k = comp->present() ? model.connectivity(comp->id) : comp->connectivity_at_removal;
      c += per_connector_ms * k;
    }
  }
  return c;
}

PlannerConfig PlannerConfig::defaults() {
  using R = RuleKind;
  using I = IssueKind;
  PlannerConfig c;
  c.costs.base_ms = {{R::Restart, 10.0},    {R::LwRedeploy, 25.0},       {R::HwRedeploy, 40.0},
                     {R::Replace, 90.0},    {R::RecreateConnector, 5.0}};
  c.applicability = {
      {I::CF1, {R::Restart, R::LwRedeploy, R::HwRedeploy, R::Replace}},
      {I::CF2, {R::Restart, R::LwRedeploy, R::HwRedeploy, R::Replace}},
      {I::CF3, {R::Restart, R::HwRedeploy, R::Replace}},
      {I::CF4, {R::RecreateConnector}},
  };
  c.static_order = {I::CF3, I::CF1, I::CF2, I::CF4};
  c.static_rule = {{I::CF3, R::HwRedeploy}, {I::CF1, R::LwRedeploy}, {I::CF2, R::Restart},
                   {I::CF4, R::RecreateConnector}};
  c.static_estimate = {{I::CF3, 3.0}, {I::CF1, 2.0}, {I::CF2, 1.0}, {I::CF4, 0.5}};
  return c;
}

void PlannerConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be a positive integer");
  for (auto kind : kAllIssueKinds) {
    auto it = applicability.find(kind);
    if (it == applicability.end() || it->second.empty()) {
      throw ConfigError("applicability matrix has no rules for " + std::string(issue_kind_name(kind)));
    }
    for (auto rule : it->second) {
      if ((rule == RuleKind::RecreateConnector) != (kind == IssueKind::CF4)) {
        throw ConfigError(std::string(rule_kind_name(rule)) + " cannot handle " +
                          std::string(issue_kind_name(kind)));
      }
    }
  }
  for (auto rule : kAllRuleKinds) {
    if (costs.base(rule) <= 0.0) {
      throw ConfigError("cost of " + std::string(rule_kind_name(rule)) + " must be positive");
    }
  }
  if (costs.per_connector_ms < 0.0) throw ConfigError("per-connector cost must be non-negative");
  std::set<IssueKind> seen;
  for (auto kind : static_order) {
    if (!seen.insert(kind).second) {
      throw ConfigError("static order lists " + std::string(issue_kind_name(kind)) + " twice");
    }
  }
  for (const auto& [kind, rule] : static_rule) {
    if ((rule == RuleKind::RecreateConnector) != (kind == IssueKind::CF4)) {
      throw ConfigError("static rule " + std::string(rule_kind_name(rule)) + " cannot handle " +
                        std::string(issue_kind_name(kind)));
    }
  }
  if (oracle_issue_bound < 1 || oracle_candidate_bound < 1) {
    throw ConfigError("oracle bounds must be positive");
  }
}

namespace {

RuleApplication skeleton(const ArchitectureModel& model, const Issue& issue, RuleKind rule,
                         const PlannerConfig& config) {
  RuleApplication app;
  app.rule = rule;
  app.issue_id = issue.id;
  app.kind = issue.kind;
  app.match = issue.match;
  app.target = issue.affected_element;
  app.issue_sequence = issue.sequence;
  app.cost_ms = config.costs.cost(rule, model, app.target);
  return app;
}

// Empty when Replace has nowhere to go.
std::string replacement_for(const ArchitectureModel& model, const std::string& target) {
  const auto* c = model.find_component(ComponentId(target));
  if (c == nullptr) return {};
  const auto* alt = model.catalog().best_alternative(c->type_name);
  return alt ? alt->name : std::string();
}

}  // namespace

std::vector<RuleApplication> enumerate_rules(const ArchitectureModel& model, const Issue& issue,
                                             const PlannerConfig& config) {
  std::vector<RuleApplication> out;
  auto it = config.applicability.find(issue.kind);
  if (it != config.applicability.end()) {
    for (auto rule : it->second) {
      auto app = skeleton(model, issue, rule, config);
      if (rule == RuleKind::Replace) {
        app.replacement_type = replacement_for(model, app.target);
        if (app.replacement_type.empty()) continue;
      }
      app.utility_increase = rule_impact(model, app);
      out.push_back(std::move(app));
    }
  }
  if (out.empty()) {
    throw PlanningError("no applicable rule for " + std::string(issue_kind_name(issue.kind)) +
                        " issue " + issue.id);
  }
  return out;
}

RuleApplication select_best(const std::vector<RuleApplication>& applications) {
  if (applications.empty()) throw PlanningError("cannot select from an empty rule list");
  const RuleApplication* best = &applications.front();
  for (const auto& a : applications) {
    if (a.utility_increase > best->utility_increase ||
        (a.utility_increase == best->utility_increase &&
         (a.cost_ms < best->cost_ms || (a.cost_ms == best->cost_ms && a.rule < best->rule)))) {
      best = &a;
    }
  }
  return *best;
}

Plan order_plan(std::vector<RuleApplication> selected, PlannerKind kind, int horizon) {
  std::stable_sort(selected.begin(), selected.end(), [](const RuleApplication& a, const RuleApplication& b) {
    const double ra = a.ratio();
    const double rb = b.ratio();
    if (ra != rb) return ra > rb;
    if (a.utility_increase != b.utility_increase) return a.utility_increase > b.utility_increase;
    return a.issue_sequence < b.issue_sequence;
  });
  Plan plan;
  plan.kind = kind;
  plan.horizon = horizon;
  plan.applications = std::move(selected);
  return plan;
}

Plan plan_static(const ArchitectureModel& model, const std::vector<Issue>& open_issues,
                 const PlannerConfig& config) {
  auto rank = [&](IssueKind kind) {
    auto it = std::find(config.static_order.begin(), config.static_order.end(), kind);
    if (it == config.static_order.end() || !config.static_rule.count(kind)) {
      throw PlanningError("static planner has no priority or rule for " +
                          std::string(issue_kind_name(kind)));
    }
    return it - config.static_order.begin();
  };
  std::vector<const Issue*> ordered;
  for (const auto& issue : open_issues) {
    (void)rank(issue.kind);
    ordered.push_back(&issue);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [&](const Issue* a, const Issue* b) {
    const auto ra = rank(a->kind);
    const auto rb = rank(b->kind);
    return ra != rb ? ra < rb : a->sequence < b->sequence;
  });

  Plan plan;
  plan.kind = PlannerKind::Static;
  plan.horizon = config.horizon;
  for (const auto* issue : ordered) {
    auto app = skeleton(model, *issue, config.static_rule.at(issue->kind), config);
    if (app.rule == RuleKind::Replace) {
      app.replacement_type = replacement_for(model, app.target);
      if (app.replacement_type.empty()) {
        throw PlanningError("static rule Replace has no alternative for " + app.target);
      }
    }
    auto est = config.static_estimate.find(issue->kind);
    app.utility_increase = est == config.static_estimate.end() ? 0.0 : est->second;
    plan.applications.push_back(std::move(app));
  }
  return plan;
}

Plan plan_udriven(const ArchitectureModel& model, const std::vector<Issue>& open_issues,
                  const PlannerConfig& config) {
  std::vector<RuleApplication> selected;
  selected.reserve(open_issues.size());
  for (const auto& issue : open_issues) selected.push_back(select_best(enumerate_rules(model, issue, config)));
  Plan plan = order_plan(std::move(selected), PlannerKind::UDriven, config.horizon);
  if (plan.applications.size() > static_cast<std::size_t>(config.horizon)) {
    plan.applications.resize(static_cast<std::size_t>(config.horizon));
  }
  return plan;
}

Plan make_plan(PlannerKind kind, const ArchitectureModel& model, const std::vector<Issue>& open_issues,
               const PlannerConfig& config, double reward_horizon_ms) {
  switch (kind) {
    case PlannerKind::Static: return plan_static(model, open_issues, config);
    case PlannerKind::UDriven: return plan_udriven(model, open_issues, config);
    case PlannerKind::Oracle: return plan_oracle(model, open_issues, config, reward_horizon_ms);
  }
  throw PlanningError("unknown planner kind");
}

double sequence_reward(double start_utility, const std::vector<RuleApplication>& sequence,
                       double horizon_ms) {
  double reward = 0.0;
  double t = 0.0;
  double u = start_utility;
  for (const auto& app : sequence) {
    const double next = t + app.cost_ms;
    reward += u * (std::min(next, horizon_ms) - std::min(t, horizon_ms));
    u += app.utility_increase;
    t = next;
  }
  if (horizon_ms > t) reward += u * (horizon_ms - t);
  return reward;
}

std::string plan_log_line(int cycle, PlannerKind kind, const RuleApplication& app) {
  std::ostringstream out;
  out.precision(12);
  out << cycle << ',' << planner_kind_name(kind) << ',' << rule_kind_name(app.rule) << ','
      << app.issue_id << ',' << issue_kind_name(app.kind) << ',' << app.target << ','
      << app.utility_increase << ',' << app.cost_ms << ',' << app.ratio();
  return out.str();
}

}  // namespace healing
