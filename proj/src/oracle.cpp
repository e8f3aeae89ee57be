#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "healing/error.hpp"
#include "healing/executor.hpp"
#include "healing/patterns.hpp"
#include "healing/planner.hpp"
#include "healing/utility.hpp"

namespace healing {

namespace {

struct Group {
  std::string shop;
  std::vector<std::vector<RuleApplication>> candidates;  // per issue
  std::vector<std::vector<std::size_t>> tied;            // best assignments
};

std::string shop_of(const ArchitectureModel& model, const Issue& issue) {
  if (issue.kind == IssueKind::CF4) {
    const auto& k = model.connector(ConnectorId(issue.affected_element));
    return model.component(k.required_side).shop.str();
  }
  return model.component(ComponentId(issue.affected_element)).shop.str();
}

// Applies in order, skipping applications whose match no longer holds.
std::vector<ChangeDelta> apply_all(ArchitectureModel& scratch,
                                   const std::vector<const RuleApplication*>& apps) {
  std::vector<ChangeDelta> deltas;
  for (const auto* app : apps) {
    if (!match_still_valid(scratch, app->match)) continue;
    try {
      deltas.push_back(apply_change(scratch, rule_event(scratch, *app)));
    } catch (const Error&) {
    }
  }
  return deltas;
}

void undo(ArchitectureModel& scratch, std::vector<ChangeDelta>& deltas) {
  for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) revert(scratch, *it);
  deltas.clear();
}

// Advances a mixed-radix counter; false once it wraps.
bool next_assignment(std::vector<std::size_t>& idx, const std::vector<std::size_t>& radix) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (++idx[i] < radix[i]) return true;
    idx[i] = 0;
  }
  return false;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace

Plan plan_oracle(const ArchitectureModel& model, const std::vector<Issue>& open_issues,
                 const PlannerConfig& config, double reward_horizon_ms) {
  Plan plan;
  plan.kind = PlannerKind::Oracle;
  plan.horizon = config.horizon;
  if (open_issues.empty()) return plan;

  std::map<std::string, std::vector<const Issue*>> by_shop;
  for (const auto& issue : open_issues) by_shop[shop_of(model, issue)].push_back(&issue);
  for (const auto& [shop, issues] : by_shop) {
    if (issues.size() > config.oracle_issue_bound) {
      throw CapacityError("oracle bound exceeded: shop " + shop + " has " + std::to_string(issues.size()) +
                          " open issues (limit " + std::to_string(config.oracle_issue_bound) + ")");
    }
  }

  ArchitectureModel scratch = model;
  const double base = utility_from_scratch(scratch);

  // Candidate gains are measured by executing on the scratch copy.
  std::vector<Group> groups;
  for (const auto& [shop, issues] : by_shop) {
    Group g;
    g.shop = shop;
    for (const auto* issue : issues) {
      std::vector<RuleApplication> cands;
      auto it = config.applicability.find(issue->kind);
      if (it != config.applicability.end()) {
        for (auto rule : it->second) {
          RuleApplication app;
          app.rule = rule;
          app.issue_id = issue->id;
          app.kind = issue->kind;
          app.match = issue->match;
          app.target = issue->affected_element;
          app.issue_sequence = issue->sequence;
          app.cost_ms = config.costs.cost(rule, model, app.target);
          if (rule == RuleKind::Replace) {
            const auto* alt = model.catalog().best_alternative(model.component(ComponentId(app.target)).type_name);
            if (alt == nullptr) continue;
            app.replacement_type = alt->name;
          }
          auto deltas = apply_all(scratch, {&app});
          if (deltas.empty()) continue;
          app.utility_increase = utility_from_scratch(scratch) - base;
          undo(scratch, deltas);
          cands.push_back(std::move(app));
        }
      }
      if (cands.empty()) {
        throw PlanningError("no applicable rule for " + std::string(issue_kind_name(issue->kind)) +
                            " issue " + issue->id);
      }
      if (cands.size() > config.oracle_candidate_bound) {
        throw CapacityError("oracle bound exceeded: issue " + issue->id + " has " +
                            std::to_string(cands.size()) + " candidate rules");
      }
      g.candidates.push_back(std::move(cands));
    }
    groups.push_back(std::move(g));
  }

  // Per shop, every assignment of one rule per issue, scored by final utility.
  // Shops share no connectors, so the best global assignment is the union.
  for (auto& g : groups) {
    std::vector<std::size_t> radix;
    for (const auto& c : g.candidates) radix.push_back(c.size());
    std::vector<std::size_t> idx(radix.size(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
      std::vector<const RuleApplication*> apps;
      for (std::size_t i = 0; i < idx.size(); ++i) apps.push_back(&g.candidates[i][idx[i]]);
      auto deltas = apply_all(scratch, apps);
      const double u = utility_from_scratch(scratch);
      undo(scratch, deltas);
      if (best == -std::numeric_limits<double>::infinity() || (u > best && !utility_close(u, best))) {
        best = u;
        g.tied.assign(1, idx);
      } else if (utility_close(u, best)) {
        g.tied.push_back(idx);
      }
    } while (next_assignment(idx, radix));
  }

  auto assignment_apps = [&](const std::vector<std::size_t>& choice) {
    std::vector<RuleApplication> apps;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& pick = groups[gi].tied[choice[gi]];
      for (std::size_t i = 0; i < pick.size(); ++i) apps.push_back(groups[gi].candidates[i][pick[i]]);
    }
    std::sort(apps.begin(), apps.end(),
              [](const RuleApplication& a, const RuleApplication& b) { return a.issue_sequence < b.issue_sequence; });
    return apps;
  };

  const std::size_t n = open_issues.size();
  std::size_t tied_total = 1;
  std::vector<std::size_t> tied_radix;
  for (const auto& g : groups) {
    tied_radix.push_back(g.tied.size());
    tied_total = saturating_mul(tied_total, g.tied.size());
  }
  std::size_t perms = 1;
  for (std::size_t i = 2; i <= n && perms <= config.oracle_sequence_cap; ++i) perms = saturating_mul(perms, i);

  if (n <= config.oracle_permutation_limit && saturating_mul(tied_total, perms) <= config.oracle_sequence_cap) {
    // Tie-break on reward: simulate every ordering of every tied assignment.
    double horizon = reward_horizon_ms;
    if (horizon <= 0.0) {
      std::vector<std::size_t> choice(groups.size(), 0);
      do {
        double total = 0.0;
        for (const auto& a : assignment_apps(choice)) total += a.cost_ms;
        horizon = std::max(horizon, total);
      } while (next_assignment(choice, tied_radix));
    }
    double best_reward = -std::numeric_limits<double>::infinity();
    std::vector<RuleApplication> best_sequence;
    std::vector<std::size_t> choice(groups.size(), 0);
    do {
      const auto apps = assignment_apps(choice);
      std::vector<std::size_t> order(apps.size());
      std::iota(order.begin(), order.end(), 0);
      do {
        double reward = 0.0;
        double t = 0.0;
        double u = base;
        std::vector<ChangeDelta> deltas;
        for (auto i : order) {
          auto step = apply_all(scratch, {&apps[i]});
          const double next = t + apps[i].cost_ms;
          reward += u * (std::min(next, horizon) - std::min(t, horizon));
          if (!step.empty()) u = utility_from_scratch(scratch);
          for (auto& d : step) deltas.push_back(std::move(d));
          t = next;
        }
        if (horizon > t) reward += u * (horizon - t);
        undo(scratch, deltas);
        if (reward > best_reward) {
          best_reward = reward;
          best_sequence.clear();
          for (auto i : order) best_sequence.push_back(apps[i]);
        }
      } while (std::next_permutation(order.begin(), order.end()));
    } while (next_assignment(choice, tied_radix));
    plan.applications = std::move(best_sequence);
    return plan;
  }

  // Too many sequences: cheapest tied assignment per shop, ratio order.
  std::vector<std::size_t> choice(groups.size(), 0);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    double cheapest = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < groups[gi].tied.size(); ++t) {
      double total = 0.0;
      const auto& pick = groups[gi].tied[t];
      for (std::size_t i = 0; i < pick.size(); ++i) total += groups[gi].candidates[i][pick[i]].cost_ms;
      if (total < cheapest) {
        cheapest = total;
        choice[gi] = t;
      }
    }
  }
  return order_plan(assignment_apps(choice), PlannerKind::Oracle, config.horizon);
}

}  // namespace healing
