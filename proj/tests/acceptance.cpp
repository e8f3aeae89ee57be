// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "healing/bench.hpp"
#include "healing/error.hpp"
#include "healing/executor.hpp"
#include "healing/planner.hpp"
#include "healing/scenario.hpp"
#include "healing/simulator.hpp"
#include "healing/utility.hpp"
#include "support.hpp"

using namespace healing;
using namespace testing;

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kCriterion1Seconds = 10.0;
constexpr double kCriterion2Seconds = 30.0;
constexpr double kCriterion3Seconds = 30.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Seeded model with one fault per listed shop, none overlapping.
ArchitectureModel disjoint_faults(std::uint64_t seed, int shops, int faults, const std::vector<IssueKind>& kinds) {
  std::mt19937_64 rng(seed);
  auto model = build_architecture(default_catalog(), BuildOptions{shops, seed, 0.2});
  for (int i = 0; i < faults; ++i) {
    const auto& ids = model.shops()[static_cast<std::size_t>(i)].component_ids;
    const auto& cid = ids[rng() % ids.size()];
    switch (kinds[static_cast<std::size_t>(i) % kinds.size()]) {
      case IssueKind::CF1: apply_change(model, CrashComponent{cid}); break;
      case IssueKind::CF2: fail_interface(model, cid.str()); break;
      case IssueKind::CF3: apply_change(model, RemoveComponent{cid}); break;
      case IssueKind::CF4: apply_change(model, CrashConnector{*model.attached(cid).begin()}); break;
    }
  }
  open_issues(model);
  return model;
}

Outcome incremental_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  auto model = build_architecture(default_catalog(), BuildOptions{100, 1, 0.2});
  MatchSet set = match_full(model);
  UtilityLedger ledger;
  total_utility(model, set, &ledger);
  double worst = 0.0;
  int steps = 0;
  while (steps < 1000) {
    const auto ev = random_event(model, rng);
    if (!ev) continue;
    ChangeDelta d;
    try {
      d = apply_change(model, *ev);
    } catch (const TransitionError&) {
      continue;
    }
    ++steps;
    const auto md = match_delta(model, d, set);
    utility_delta(ledger, md.invalidated, md.added, model);
    set.apply(md);
    const double expected = reference_utility(model);
    worst = std::max(worst, std::abs(ledger.total() - expected) / std::max(1.0, std::abs(expected)));
  }
  const double secs = seconds_since(t0);
  return {worst <= kRelTol && secs < kCriterion1Seconds,
          "1000 events on 100 shops, max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

double execute_all(ArchitectureModel model, const Plan& plan) {
  VirtualClock clock;
  execute_plan(model, plan, clock);
  return reference_utility(model);
}

Outcome greedy_equals_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = PlannerConfig::defaults();
  int mismatches = 0;
  constexpr IssueKind all[] = {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3, IssueKind::CF4};
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed * 7919);
    const int n = 1 + static_cast<int>(rng() % 4);
    std::vector<IssueKind> kinds;
    for (int i = 0; i < n; ++i) kinds.push_back(all[rng() % 4]);
    const auto model = disjoint_faults(seed, 6, n, kinds);
    const auto issues = model.annotations().issues.open();
    auto full = cfg;
    full.horizon = static_cast<int>(issues.size());
    if (execute_all(model, plan_udriven(model, issues, full)) != execute_all(model, plan_oracle(model, issues, cfg))) {
      ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kCriterion2Seconds,
          "200 fixtures, " + std::to_string(mismatches) + " final-utility mismatches, " + fmt("%.2f", secs) + " s"};
}

// Reward of completing the gains in order over [0, horizon], from zero.
double step_reward(const std::vector<RuleApplication>& seq, double horizon) {
  double t = 0.0;
  double r = 0.0;
  for (const auto& a : seq) {
    t += a.cost_ms;
    r += a.utility_increase * (horizon - t);
  }
  return r;
}

Outcome ratio_ordering() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3);
  int violations = 0;
  int checked = 0;
  for (int set = 0; set < 200; ++set) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<RuleApplication> apps;
    for (int i = 0; i < n; ++i) {
      RuleApplication a;
      a.utility_increase = static_cast<double>(1 + rng() % 20);
      a.cost_ms = static_cast<double>(1 + rng() % 10);
      a.issue_sequence = static_cast<std::uint64_t>(i + 1);
      apps.push_back(a);
    }
    const double horizon = std::accumulate(apps.begin(), apps.end(), 0.0,
                                           [](double s, const RuleApplication& a) { return s + a.cost_ms; });
    const auto ordered = order_plan(apps).applications;
    const double best = step_reward(ordered, horizon);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<RuleApplication> seq;
      for (int i : perm) seq.push_back(apps[static_cast<std::size_t>(i)]);
      const double r = step_reward(seq, horizon);
      ++checked;
      if (r > best) ++violations;
      if (r == best) {
        // Equal reward only when the ratio sequences coincide.
        for (std::size_t i = 0; i < seq.size(); ++i) {
          if (seq[i].utility_increase * ordered[i].cost_ms != ordered[i].utility_increase * seq[i].cost_ms) {
            ++violations;
            break;
          }
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < kCriterion3Seconds,
          "200 sets, " + std::to_string(checked) + " permutations, " + std::to_string(violations) + " violations, " +
              fmt("%.2f", secs) + " s"};
}

Scenario scenario_file(const std::string& rel) { return load_scenario(source_path(rel)); }

Outcome replace_first_scenario() {
  const auto s = scenario_file("scenarios/replace_first.json");
  const auto st = run(s, PlannerKind::Static).report;
  const auto ud = run(s, PlannerKind::UDriven).report;
  const bool pass = st.error.empty() && ud.error.empty() && ud.final_utility > st.final_utility &&
                    ud.reward > st.reward;
  return {pass, "final " + fmt("%.4f", ud.final_utility) + " vs " + fmt("%.4f", st.final_utility) + ", reward " +
                    fmt("%.1f", ud.reward) + " vs " + fmt("%.1f", st.reward)};
}

// Rules and targets in execution order, read back from the trace and issue log.
std::vector<std::pair<RuleKind, std::string>> executed(const RunResult& r) {
  std::map<std::string, std::string> element;
  for (const auto& line : r.issue_log) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    if (f.size() >= 5 && f[1] == "open") element[f[2]] = f[4];
  }
  std::vector<std::pair<RuleKind, std::string>> out;
  for (const auto& p : r.trace.points()) {
    std::stringstream tags(p.event);
    for (std::string tag; std::getline(tags, tag, ';');) {
      if (!tag.starts_with("apply:")) continue;
      const auto rest = tag.substr(6);
      const auto colon = rest.find(':');
      out.emplace_back(parse_rule_kind(rest.substr(0, colon)), element.at(rest.substr(colon + 1)));
    }
  }
  return out;
}

ChangeEvent event_for(const ArchitectureModel& model, RuleKind rule, const std::string& target) {
  switch (rule) {
    case RuleKind::Restart: return RestartComponent{ComponentId(target)};
    case RuleKind::LwRedeploy: return RedeployComponent{ComponentId(target), false};
    case RuleKind::HwRedeploy: return RedeployComponent{ComponentId(target), true};
    case RuleKind::Replace: {
      const auto& c = model.component(ComponentId(target));
      return ReplaceComponent{c.id, model.catalog().best_alternative(c.type_name)->name};
    }
    case RuleKind::RecreateConnector: return RecreateConnector{ConnectorId(target)};
  }
  return RestartComponent{ComponentId(target)};
}

// Reward of a repair sequence started right after the injections, integrated
// from the step trace built with the configured costs.
double analytic_reward(const Scenario& s, const std::vector<std::pair<RuleKind, std::string>>& seq,
                       double* final_utility) {
  auto model = initial_model(s);
  const double u0 = reference_utility(model);
  std::mt19937_64 rng(0);
  const double t_inject = s.injections.front().time_ms;
  for (const auto& inj : s.injections) inject(model, inj, VirtualClock(inj.time_ms), rng);
  double u = reference_utility(model);
  double t = t_inject;
  double reward = u0 * t_inject;
  for (const auto& [rule, target] : seq) {
    const double done = t + s.planner.costs.cost(rule, model, target);
    reward += u * (done - t);
    apply_change(model, event_for(model, rule, target));
    u = reference_utility(model);
    t = done;
  }
  reward += u * (s.duration_ms - t);
  *final_utility = u;
  return reward;
}

Outcome reorder_scenario() {
  const auto s = scenario_file("scenarios/reorder.json");
  const auto st = run(s, PlannerKind::Static);
  const auto ud = run(s, PlannerKind::UDriven);
  double st_final = 0.0;
  double ud_final = 0.0;
  const double st_reward = analytic_reward(s, executed(st), &st_final);
  const double ud_reward = analytic_reward(s, executed(ud), &ud_final);
  const double gap = ud_reward - st_reward;
  const double measured = ud.report.reward - st.report.reward;
  const bool equal_final = near(ud.report.final_utility, st.report.final_utility, kRelTol);
  const bool pass = equal_final && gap > 0.0 && measured >= gap * (1.0 - kRelTol) &&
                    near(st_final, st.report.final_utility, kRelTol) && near(ud_final, ud.report.final_utility, kRelTol);
  return {pass, "final " + fmt("%.6f", ud.report.final_utility) + " vs " + fmt("%.6f", st.report.final_utility) +
                    ", reward gap " + fmt("%.3f", measured) + " (analytic " + fmt("%.3f", gap) + ")"};
}

double median_ms(PlannerKind planner, const ArchitectureModel& model, const PlannerConfig& cfg) {
  TimingStats stats;
  time_planner(planner, model, cfg, 15, 200, 0.05, 3000.0, stats);
  return stats.median();
}

Outcome planning_trends() {
  auto cfg = PlannerConfig::defaults();
  const auto mid = bench_fixture(default_catalog(), 100, 100, 1);
  const double oracle = median_ms(PlannerKind::Oracle, mid, cfg);
  const double ud = median_ms(PlannerKind::UDriven, mid, cfg);
  const double st = median_ms(PlannerKind::Static, mid, cfg);
  const auto wide100 = bench_fixture(default_catalog(), 1000, 100, 1);
  const auto wide1000 = bench_fixture(default_catalog(), 1000, 1000, 1);
  const double growth = median_ms(PlannerKind::UDriven, wide1000, cfg) / median_ms(PlannerKind::UDriven, wide100, cfg);
  const bool pass = oracle > 2.0 * ud && growth < 20.0 && st <= ud;
  return {pass, "100 shops/100 issues: oracle " + fmt("%.3f", oracle) + " ms, udriven " + fmt("%.3f", ud) +
                    " ms, static " + fmt("%.3f", st) + " ms; udriven 1000/100 issues ratio " + fmt("%.2f", growth)};
}

Outcome analyzer_idempotence() {
  std::mt19937_64 rng(7);
  auto model = build_architecture(default_catalog(), BuildOptions{10, 7, 0.2});
  MatchSet set = match_full(model);
  auto& reg = model.annotations().issues;
  int steps = 0;
  int duplicates = 0;
  int mismatched = 0;
  while (steps < 1000) {
    const auto ev = random_event(model, rng);
    if (!ev) continue;
    ChangeDelta d;
    try {
      d = apply_change(model, *ev);
    } catch (const TransitionError&) {
      continue;
    }
    ++steps;
    const auto md = match_delta(model, d, set);
    set.apply(md);
    analyze(model, md.added, md.invalidated, reg, steps);
    duplicates += static_cast<int>(analyze(model, md.added, md.invalidated, reg, steps).created.size());
    if (reg.size() != negatives(set).size()) ++mismatched;
  }
  return {duplicates == 0 && mismatched == 0, "1000 deltas analyzed twice, " + std::to_string(duplicates) +
                                                  " duplicates, " + std::to_string(mismatched) + " registry mismatches"};
}

Outcome rule_conformance() {
  const auto cfg = PlannerConfig::defaults();
  std::map<RuleKind, int> per_rule;
  int violations = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto base =
        disjoint_faults(seed, 4, 4, {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3, IssueKind::CF4});
    const auto issues = base.annotations().issues.open();
    for (const auto& issue : issues) {
      for (const auto& app : enumerate_rules(base, issue, cfg)) {
        ArchitectureModel model = base;
        const MatchSet set = match_full(model);
        std::map<std::string, double> others;
        for (const auto& o : issues) {
          if (o.id != issue.id) others[o.id] = sub_utility(model, o.match);
        }
        VirtualClock clock;
        const auto out = execute_application(model, app, clock);
        if (out.status != ExecutionStatus::Applied) {
          ++violations;
          continue;
        }
        ++per_rule[app.rule];
        const auto md = match_delta(model, out.delta, set);
        int gone = 0;
        for (const auto& m : md.invalidated) {
          const bool refreshed = std::find(md.added.begin(), md.added.end(), m) != md.added.end();
          if (polarity(m.pattern) == Polarity::Negative && !refreshed) ++gone;
        }
        const bool handled = std::find(md.invalidated.begin(), md.invalidated.end(), issue.match) != md.invalidated.end();
        const bool new_negative = std::any_of(md.added.begin(), md.added.end(),
                                              [](const Match& m) { return polarity(m.pattern) == Polarity::Negative; });
        if (gone != 1 || !handled || new_negative) ++violations;
        for (const auto& o : issues) {
          if (o.id == issue.id) continue;
          if (!match_still_valid(model, o.match) || sub_utility(model, o.match) != others[o.id]) ++violations;
        }
      }
    }
  }
  std::string counts;
  for (auto r : kAllRuleKinds) {
    counts += (counts.empty() ? "" : " ") + std::string(rule_kind_name(r)) + "=" + std::to_string(per_rule[r]);
  }
  const bool every_rule = std::all_of(kAllRuleKinds.begin(), kAllRuleKinds.end(), [&](RuleKind r) { return per_rule[r] > 0; });
  return {violations == 0 && every_rule, counts + ", " + std::to_string(violations) + " violations"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"incremental utility equals from-scratch", incremental_equivalence},
      {"greedy and oracle reach the same final utility", greedy_equals_oracle},
      {"ratio order maximizes reward", ratio_ordering},
      {"replace-dominates scenario", replace_first_scenario},
      {"same-final-utility scenario", reorder_scenario},
      {"planning-time trends", planning_trends},
      {"analyzer idempotence", analyzer_idempotence},
      {"rule application conformance", rule_conformance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
