#include "doctest.h"
#include "healing/error.hpp"
#include "healing/simulator.hpp"
#include "healing/utility.hpp"
#include "support.hpp"

using namespace healing;
using namespace testing;

namespace {

Injection named(double t, IssueKind kind, std::string element) {
  return Injection{t, kind, InjectionTarget{TargetPolicy::NamedComponent, std::move(element)}};
}

Scenario small(std::vector<Injection> injections, double duration = 2000.0) {
  Scenario s;
  s.name = "small";
  s.seed = 5;
  s.shops = 4;
  s.duration_ms = duration;
  s.catalog = default_catalog();
  s.injections = std::move(injections);
  return s;
}

// Reward of a run recomputed from the trace rows alone.
double reward_from_points(const Trace& t) {
  double r = 0.0;
  const auto& p = t.points();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double until = i + 1 < p.size() ? p[i + 1].time_ms : t.end();
    r += p[i].utility * (until - p[i].time_ms);
  }
  return r;
}

}  // namespace

TEST_CASE("inject examples") {
  auto model = build_architecture(2, default_catalog(), 0);
  std::mt19937_64 rng(1);
  const VirtualClock clock(100.0);
  inject(model, named(100, IssueKind::CF1, "s1.inventory"), clock, rng);
  CHECK(model.component(ComponentId("s1.inventory")).state == ComponentState::Crashed);
  inject(model, named(100, IssueKind::CF2, "s2.query"), clock, rng);
  CHECK(model.component(ComponentId("s2.query")).max_failure_count() == kFailureThreshold + 1);
  inject(model, named(100, IssueKind::CF3, "s1.persistence"), clock, rng);
  CHECK(model.component(ComponentId("s1.persistence")).state == ComponentState::Removed);
  CHECK_THROWS_AS(inject(model, named(100, IssueKind::CF1, "s9.query"), clock, rng), ScenarioError);
  CHECK_THROWS_AS(inject(model, named(200, IssueKind::CF1, "s2.inventory"), clock, rng), ScenarioError);
  CHECK_THROWS_AS(inject(model, named(100, IssueKind::CF1, "s1.inventory"), clock, rng), TransitionError);

  Injection cf4{100, IssueKind::CF4, InjectionTarget{TargetPolicy::NamedComponent, "s2.inventory"}};
  inject(model, cf4, clock, rng);
  const auto& att = model.attached(ComponentId("s2.inventory"));
  CHECK(std::any_of(att.begin(), att.end(),
                    [&](const ConnectorId& k) { return model.connector(k).state == ConnectorState::Crashed; }));
}

TEST_CASE("random injections only hit healthy targets") {
  auto model = build_architecture(3, default_catalog(), 0);
  std::mt19937_64 rng(9);
  const VirtualClock clock;
  constexpr IssueKind kinds[] = {IssueKind::CF1, IssueKind::CF2, IssueKind::CF3, IssueKind::CF4};
  for (int i = 0; i < 12; ++i) {
    const auto before = model;
    const Injection inj{0, kinds[i % 4], InjectionTarget{i % 2 ? TargetPolicy::RandomShop : TargetPolicy::RandomComponent, {}}};
    const auto delta = inject(model, inj, clock, rng);
    for (const auto& ch : delta.changes) {
      if (const auto* c = ch.component(); c && c->before) CHECK(is_healthy(before, *c->before));
    }
  }
}

TEST_CASE("no faults: the trace is flat and the reward is U0 times the duration") {
  const auto s = small({}, 1234.0);
  const auto r = run(s, PlannerKind::UDriven);
  CHECK(r.trace.points().size() == 1);
  CHECK(r.report.reward == doctest::Approx(r.report.initial_utility * 1234.0).epsilon(1e-12));
  CHECK(r.report.cycles == 0);
  CHECK(r.report.final_utility == r.report.initial_utility);
}

TEST_CASE("every planner heals a handful of faults") {
  const auto s = small({named(100, IssueKind::CF1, "s1.inventory"), named(100, IssueKind::CF2, "s2.query"),
                        named(300, IssueKind::CF3, "s3.persistence")});
  for (auto kind : {PlannerKind::Static, PlannerKind::UDriven, PlannerKind::Oracle}) {
    CAPTURE(planner_kind_name(kind));
    const auto r = run(s, kind);
    CHECK(r.report.error.empty());
    CHECK(r.report.open_issues_at_end == 0);
    CHECK(r.report.applied == 3);
    CHECK(r.report.injections == 3);
    CHECK(r.report.final_utility >= r.report.initial_utility - 1e-9);
    CHECK(near(r.report.final_utility, reference_utility(r.final_model)));
    CHECK(near(r.report.reward, reward_from_points(r.trace)));
    CHECK(r.issue_log.size() == 6);
  }
}

TEST_CASE("utility-driven reward beats static on the three-fault scenarios") {
  for (const char* file : {"scenarios/replace_first.json", "scenarios/reorder.json"}) {
    CAPTURE(file);
    const auto s = load_scenario(source_path(file));
    const auto st = run(s, PlannerKind::Static);
    const auto ud = run(s, PlannerKind::UDriven);
    CHECK(ud.report.reward > st.report.reward);
    CHECK(ud.report.final_utility >= st.report.final_utility - 1e-9);
    CHECK(lost_reward(ud.report, st.report) > 0.0);
    CHECK(lost_reward(ud.report, ud.report) == 0.0);
  }
}

TEST_CASE("runs are deterministic") {
  const auto s = load_scenario(source_path("scenarios/steady.json"));
  for (auto kind : {PlannerKind::Static, PlannerKind::UDriven}) {
    const auto a = run(s, kind);
    const auto b = run(s, kind);
    CHECK(a.trace.to_csv() == b.trace.to_csv());
    CHECK(a.plan_log == b.plan_log);
    CHECK(a.issue_log == b.issue_log);
    CHECK(a.report.reward == b.report.reward);
  }
}

TEST_CASE("steady scenario: bookkeeping is conserved") {
  const auto s = load_scenario(source_path("scenarios/steady.json"));
  const auto r = run(s, PlannerKind::UDriven);
  REQUIRE(r.report.error.empty());
  CHECK(r.report.injections == static_cast<int>(s.injections.size()));
  CHECK(r.report.open_issues_at_end == 0);
  CHECK(near(r.report.final_utility, reference_utility(r.final_model)));
  CHECK(r.report.final_utility >= r.report.initial_utility - 1e-6);
  int opened = 0;
  int closed = 0;
  for (const auto& line : r.issue_log) {
    if (line.find(",open,") != std::string::npos) ++opened;
    if (line.find(",close,") != std::string::npos) ++closed;
  }
  CHECK(opened == closed);
  CHECK(validate_model(r.final_model).empty());
}

TEST_CASE("charging planning time delays repairs") {
  const auto s = load_scenario(source_path("scenarios/reorder.json"));
  const auto free = run(s, PlannerKind::Oracle, s.planner, false);
  const auto charged = run(s, PlannerKind::Oracle, s.planner, true);
  CHECK(charged.report.reward <= free.report.reward);
  CHECK(charged.report.final_utility == doctest::Approx(free.report.final_utility));
}

TEST_CASE("repairs that would finish after the end are not started") {
  const auto s = small({named(100, IssueKind::CF3, "s1.persistence")}, 150.0);
  auto cfg = s.planner;
  const auto r = run(s, PlannerKind::UDriven, cfg);
  CHECK(r.report.applied == 0);
  CHECK(r.report.not_started == 1);
  CHECK(r.report.open_issues_at_end == 1);
}

TEST_CASE("a bad injection stops the run with an error") {
  const auto s = small({named(100, IssueKind::CF1, "s1.inventory"), named(100, IssueKind::CF1, "s1.inventory")});
  const auto r = run(s, PlannerKind::UDriven);
  CHECK_FALSE(r.report.error.empty());
  CHECK(r.report.injections == 1);
  CHECK(r.trace.end() == s.duration_ms);
}

TEST_CASE("oracle capacity overflow is reported") {
  std::vector<Injection> many;
  for (const char* c : {"query", "inventory", "reputation", "persistence"}) {
    many.push_back(named(10, IssueKind::CF1, std::string("s1.") + c));
  }
  auto s = small(many);
  s.planner.oracle_issue_bound = 3;
  const auto r = run(s, PlannerKind::Oracle);
  CHECK(r.report.error.find("bound exceeded") != std::string::npos);
  CHECK(r.report.applied == 0);
}
