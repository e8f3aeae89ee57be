#include "healing/scenario.hpp"

#include <filesystem>

#include "healing/error.hpp"
#include "json_util.hpp"

namespace healing {

using detail::json;

std::string_view target_policy_name(TargetPolicy p) {
  switch (p) {
    case TargetPolicy::RandomComponent: return "randomComponent";
    case TargetPolicy::NamedComponent: return "namedComponent";
    case TargetPolicy::RandomShop: return "randomShop";
  }
  return "?";
}

TargetPolicy parse_target_policy(std::string_view name) {
  for (auto p : {TargetPolicy::RandomComponent, TargetPolicy::NamedComponent, TargetPolicy::RandomShop}) {
    if (target_policy_name(p) == name) return p;
  }
  throw ScenarioError("unknown target policy '" + std::string(name) +
                      "' (valid: randomComponent, namedComponent, randomShop)");
}

void Scenario::validate() const {
  if (shops < 1) throw ScenarioError("scenario needs at least one shop");
  if (!(duration_ms > 0.0)) throw ScenarioError("duration_ms must be positive");
  if (criticality_jitter < 0.0 || criticality_jitter >= 1.0) {
    throw ScenarioError("criticality_jitter must be in [0, 1)");
  }
  if (reward_horizon_ms < 0.0) throw ScenarioError("reward_horizon_ms must be non-negative");
  double last = 0.0;
  for (std::size_t i = 0; i < injections.size(); ++i) {
    const auto& inj = injections[i];
    const std::string where = "injection " + std::to_string(i);
    if (inj.time_ms < last) throw ScenarioError(where + ": injection times must not decrease");
    if (inj.time_ms < 0.0 || inj.time_ms > duration_ms) {
      throw ScenarioError(where + ": time outside [0, duration_ms]");
    }
    if (inj.target.policy == TargetPolicy::NamedComponent && inj.target.element.empty()) {
      throw ScenarioError(where + ": namedComponent needs a component");
    }
    last = inj.time_ms;
  }
  try {
    planner.validate();
    catalog.validate();
  } catch (const Error& e) {
    throw ScenarioError(e.what());
  }
}

namespace {

void read_planner(const json& j, PlannerConfig& cfg) {
  const std::string where = "planner";
  cfg.horizon = detail::optional_field<int>(j, "horizon", cfg.horizon, where);
  if (j.contains("costs_ms")) {
    for (const auto& [name, v] : j.at("costs_ms").items()) cfg.costs.base_ms[parse_rule_kind(name)] = v.get<double>();
  }
  cfg.costs.per_connector_ms =
      detail::optional_field<double>(j, "per_connector_ms", cfg.costs.per_connector_ms, where);
  if (j.contains("applicability")) {
    for (const auto& [kind, rules] : j.at("applicability").items()) {
      auto& row = cfg.applicability[parse_issue_kind(kind)];
      row.clear();
      for (const auto& r : rules) row.push_back(parse_rule_kind(r.get<std::string>()));
    }
  }
  if (j.contains("static_order")) {
    cfg.static_order.clear();
    for (const auto& k : j.at("static_order")) cfg.static_order.push_back(parse_issue_kind(k.get<std::string>()));
  }
  if (j.contains("static_rule")) {
    for (const auto& [kind, rule] : j.at("static_rule").items()) {
      cfg.static_rule[parse_issue_kind(kind)] = parse_rule_kind(rule.get<std::string>());
    }
  }
  if (j.contains("static_estimate")) {
    for (const auto& [kind, v] : j.at("static_estimate").items()) {
      cfg.static_estimate[parse_issue_kind(kind)] = v.get<double>();
    }
  }
  cfg.oracle_issue_bound = detail::optional_field<std::size_t>(j, "oracle_issue_bound", cfg.oracle_issue_bound, where);
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const std::string& base_dir) {
  Scenario s;
  try {
    const json j = detail::parse_json(json_text, "scenario");
    const std::string where = "scenario";
    s.name = detail::optional_field<std::string>(j, "name", "", where);
    s.seed = detail::optional_field<std::uint64_t>(j, "seed", 0, where);
    s.shops = detail::required_field<int>(j, "shops", where);
    s.duration_ms = detail::required_field<double>(j, "duration_ms", where);
    s.criticality_jitter = detail::optional_field<double>(j, "criticality_jitter", 0.0, where);
    s.charge_planning_time = detail::optional_field<bool>(j, "charge_planning_time", false, where);
    s.reward_horizon_ms = detail::optional_field<double>(j, "reward_horizon_ms", 0.0, where);
    if (j.contains("catalog")) {
      std::filesystem::path p = j.at("catalog").get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      s.catalog = load_catalog(p.string());
    } else {
      s.catalog = default_catalog();
    }
    if (j.contains("planner")) read_planner(j.at("planner"), s.planner);
    if (j.contains("injections")) {
      for (const auto& item : j.at("injections")) {
        Injection inj;
        inj.time_ms = detail::required_field<double>(item, "time_ms", "injection");
        inj.kind = parse_issue_kind(detail::required_field<std::string>(item, "kind", "injection"));
        if (item.contains("target")) {
          const auto& t = item.at("target");
          inj.target.policy = parse_target_policy(
              detail::optional_field<std::string>(t, "policy", "randomComponent", "target"));
          inj.target.element = detail::optional_field<std::string>(t, "component", "", "target");
          if (t.contains("connector")) inj.target.element = t.at("connector").get<std::string>();
        }
        s.injections.push_back(std::move(inj));
      }
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    throw ScenarioError(e.what());
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const Error& e) {
    throw ScenarioError(e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_scenario(text, dir.empty() ? "." : dir);
}

}  // namespace healing
