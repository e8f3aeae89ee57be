#include "doctest.h"
#include "healing/error.hpp"
#include "healing/executor.hpp"
#include "healing/planner.hpp"
#include "healing/utility.hpp"
#include "support.hpp"

using namespace healing;
using namespace testing;

namespace {

RuleApplication application_for(const ArchitectureModel& model, const Issue& issue, RuleKind rule) {
  RuleApplication app;
  app.rule = rule;
  app.issue_id = issue.id;
  app.kind = issue.kind;
  app.match = issue.match;
  app.target = issue.affected_element;
  if (rule == RuleKind::Replace) {
    app.replacement_type = model.catalog().best_alternative(model.component(ComponentId(app.target)).type_name)->name;
  }
  return app;
}

// Simulate-on-copy oracle for rule impact.
double executed_gain(const ArchitectureModel& model, const RuleApplication& app) {
  ArchitectureModel copy = model;
  const double before = reference_utility(copy);
  apply_change(copy, rule_event(copy, app));
  return reference_utility(copy) - before;
}

}  // namespace

TEST_CASE("P1+ value is criticality x reliability x connectivity") {
  const auto model = build_architecture(1, hub_catalog(), 0);
  const auto set = match_full(model);
  const auto* hub = set.find(PatternId::StartedComponent, "s1.hub|s1");
  REQUIRE(hub);
  CHECK(sub_utility(model, *hub) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("P2- value negates the component's P1+ value") {
  auto model = build_architecture(1, hub_catalog(), 0);
  fail_interface(model, "s1.hub");
  const auto set = match_full(model);
  const auto* m = set.find(PatternId::FailingComponent, "s1.hub|s1");
  REQUIRE(m);
  CHECK(sub_utility(model, *m) == doctest::Approx(-3.0).epsilon(1e-12));
  // The P2- value equals the change from excluding the hub's P1+ contribution.
  const auto healthy = build_architecture(1, hub_catalog(), 0);
  CHECK(near(reference_utility(model) - reference_utility(healthy), -3.0));
}

TEST_CASE("P1+ with connectivity zero is worth nothing") {
  std::vector<ComponentTypeSpec> types{{"Solo", "", 0.9, 4.0, {"IA"}, {}}};
  const auto model = build_architecture(1, Catalog({"IA"}, types), 0);
  const auto set = match_full(model);
  REQUIRE(set.of(PatternId::StartedComponent).size() == 1);
  CHECK(sub_utility(model, set.of(PatternId::StartedComponent).begin()->second) == 0.0);
}

TEST_CASE("total utility examples") {
  ArchitectureModel empty(pair_catalog());
  CHECK(total_utility(empty, match_full(empty)) == 0.0);

  auto model = build_architecture(1, pair_catalog(), 0);
  CHECK(total_utility(model, match_full(model)) == doctest::Approx(8.0).epsilon(1e-12));
  fail_interface(model, "s1.alpha");
  UtilityLedger ledger;
  const double u = total_utility(model, match_full(model), &ledger);
  CHECK(u == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(near(u, reference_utility(model)));
  CHECK(ledger.size() == 3);
  CHECK(near(ledger.total(), ledger.recomputed_total()));
}

TEST_CASE("utility_delta examples") {
  auto model = build_architecture(1, pair_catalog(), 0);
  MatchSet set = match_full(model);
  UtilityLedger ledger;
  total_utility(model, set, &ledger);
  CHECK(utility_delta(ledger, {}, {}, model) == 0.0);

  const double before = reference_utility(model);
  const auto d = apply_change(model, CrashComponent{ComponentId("s1.alpha")});
  const auto md = match_delta(model, d, set);
  const double du = utility_delta(ledger, md.invalidated, md.added, model);
  CHECK(du == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(near(du, reference_utility(model) - before));
  set.apply(md);
  CHECK(near(ledger.total(), reference_utility(model)));
}

TEST_CASE("utility_delta: a new started component adds its value") {
  // Restarting a stopped component brings back exactly one P1+ match.
  auto model = build_architecture(1, pair_catalog(), 0);
  MatchSet set = match_full(model);
  UtilityLedger ledger;
  total_utility(model, set, &ledger);
  apply_change(model, StopComponent{ComponentId("s1.beta")});
  set = match_full(model);
  total_utility(model, set, &ledger);
  const auto d = apply_change(model, RestartComponent{ComponentId("s1.beta")});
  const auto md = match_delta(model, d, set);
  CHECK(utility_delta(ledger, md.invalidated, md.added, model) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("utility_delta rejects unknown removed matches without mutating") {
  auto model = build_architecture(1, pair_catalog(), 0);
  UtilityLedger ledger;
  total_utility(model, match_full(model), &ledger);
  const double total = ledger.total();
  const auto ghost = Match::make(PatternId::CrashedComponent, {{"component", "s1.alpha"}, {"shop", "s1"}});
  const auto real = match_full(model).of(PatternId::StartedComponent).begin()->second;
  CHECK_THROWS_AS(utility_delta(ledger, {real, ghost}, {}, model), ConsistencyError);
  CHECK(ledger.total() == total);
  CHECK(ledger.size() == 2);
}

TEST_CASE("dangling bindings raise evaluation errors") {
  const auto model = build_architecture(1, pair_catalog(), 0);
  const auto m = Match::make(PatternId::StartedComponent, {{"component", "s1.zeta"}, {"shop", "s1"}});
  CHECK_THROWS_AS(sub_utility(model, m), EvaluationError);
}

TEST_CASE("ledger CSV lists every match") {
  const auto model = build_architecture(1, pair_catalog(), 0);
  UtilityLedger ledger;
  total_utility(model, match_full(model), &ledger);
  CHECK(ledger.to_csv() == "pattern,key,value\nP1+,s1.alpha|s1,3\nP1+,s1.beta|s1,5\n");
}

TEST_CASE("CF4 value is minus the mean of the endpoint potentials") {
  auto model = build_architecture(1, pair_catalog(), 0);
  apply_change(model, CrashConnector{ConnectorId("s1.beta:IAlpha")});
  const auto set = match_full(model);
  REQUIRE(set.of(PatternId::CrashedConnector).size() == 1);
  CHECK(sub_utility(model, set.of(PatternId::CrashedConnector).begin()->second) ==
        doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("rule_impact examples") {
  auto model = build_architecture(1, hub_catalog(), 0);
  fail_interface(model, "s1.hub");
  const auto issues = open_issues(model);
  REQUIRE(issues.size() == 1);
  const auto& issue = issues.front();
  CHECK(rule_impact(model, application_for(model, issue, RuleKind::Restart)) ==
        doctest::Approx(3.0).epsilon(1e-12));
  const auto replace = application_for(model, issue, RuleKind::Replace);
  CHECK(rule_impact(model, replace) == doctest::Approx(4.8).epsilon(1e-12));
  CHECK(near(rule_impact(model, replace), executed_gain(model, replace)));

  auto pair = build_architecture(1, pair_catalog(), 0);
  apply_change(pair, CrashConnector{ConnectorId("s1.beta:IAlpha")});
  const auto cf4 = open_issues(pair).front();
  const auto recreate = application_for(pair, cf4, RuleKind::RecreateConnector);
  CHECK(rule_impact(pair, recreate) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(rule_impact(pair, recreate) == doctest::Approx(-cf4.utility_drop).epsilon(1e-12));
}

TEST_CASE("rule_impact rejects stale and mismatched applications") {
  auto model = build_architecture(1, hub_catalog(), 0);
  fail_interface(model, "s1.hub");
  const auto issue = open_issues(model).front();
  auto app = application_for(model, issue, RuleKind::Restart);
  app.rule = RuleKind::RecreateConnector;
  CHECK_THROWS_AS(rule_impact(model, app), EvaluationError);
  apply_change(model, RestartComponent{ComponentId("s1.hub")});
  CHECK_THROWS_AS(rule_impact(model, application_for(model, issue, RuleKind::Restart)), StalenessError);
}

TEST_CASE("property: rule_impact equals the executed utility change") {
  const auto config = PlannerConfig::defaults();
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    std::mt19937_64 rng(seed);
    auto model = build_architecture(default_catalog(), BuildOptions{3, seed, 0.25});
    // Several faults, possibly overlapping, to exercise neighbour terms.
    for (int i = 0; i < 12; ++i) {
      if (auto ev = random_event(model, rng)) {
        try {
          apply_change(model, *ev);
        } catch (const TransitionError&) {
        }
      }
    }
    for (const auto& issue : open_issues(model)) {
      for (auto rule : config.applicability.at(issue.kind)) {
        const auto* c = model.find_component(ComponentId(issue.affected_element));
        if (rule == RuleKind::Replace && (!c || !model.catalog().best_alternative(c->type_name))) continue;
        const auto app = application_for(model, issue, rule);
        const double predicted = rule_impact(model, app);
        const double actual = executed_gain(model, app);
        INFO(rule_kind_name(rule), " on ", issue.affected_element);
        CHECK(near(predicted, actual, 1e-9));
        ++checked;
      }
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("property: sub-utilities respect polarity") {
  std::mt19937_64 rng(5);
  auto model = build_architecture(default_catalog(), BuildOptions{4, 5, 0.3});
  for (int i = 0; i < 500; ++i) {
    if (auto ev = random_event(model, rng)) {
      try {
        apply_change(model, *ev);
      } catch (const TransitionError&) {
      }
    }
    const auto set = match_full(model);
    for (auto p : kAllPatterns) {
      for (const auto& [key, m] : set.of(p)) {
        const double v = sub_utility(model, m);
        if (polarity(p) == Polarity::Positive) {
          CHECK(v >= 0.0);
        } else {
          CHECK(v <= 0.0);
        }
      }
    }
    CHECK(near(utility_from_scratch(model), reference_utility(model)));
  }
}
