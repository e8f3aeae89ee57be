#include "healing/utility.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "healing/change.hpp"
#include "healing/error.hpp"

namespace healing {

namespace {

double reliability_of(const ArchitectureModel& model, const Component& c) {
  return model.type_of(c).reliability;
}

const Component& bound_component(const ArchitectureModel& model, const Match& m,
                                 std::string_view role) {
  const auto& id = m.bound(role);
  const auto* c = model.find_component(ComponentId(id));
  if (c == nullptr) {
    throw EvaluationError(std::string(pattern_name(m.pattern)) + " match '" + m.key +
                          "' binds missing component '" + id + "'");
  }
  return *c;
}

// Sum of the component-anchored sub-utilities of `c` (P1+..P4-).
double component_contribution(const ArchitectureModel& model, const Component& c) {
  const double pot = potential(model, c);
  switch (c.state) {
    case ComponentState::Started:
      return c.max_failure_count() > kFailureThreshold ? pot - pot : pot;
    case ComponentState::Crashed:
      return -pot;
    case ComponentState::Removed:
      return c.replaced_by ? 0.0 : -pot;
    case ComponentState::Stopped:
      return 0.0;
  }
  return 0.0;
}

double crashed_connector_value(const ArchitectureModel& model, const Connector& k) {
  const auto& a = model.component(k.provided_side);
  const auto& b = model.component(k.required_side);
  return -(potential(model, a) + potential(model, b)) / 2.0;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double potential(const ArchitectureModel& model, const Component& c) {
  const int k = c.state == ComponentState::Removed ? c.connectivity_at_removal
                                                   : model.connectivity(c.id);
  return c.criticality * reliability_of(model, c) * k;
}

double sub_utility(const ArchitectureModel& model, const Match& match) {
  switch (match.pattern) {
    case PatternId::StartedComponent:
      return potential(model, bound_component(model, match, "component"));
    case PatternId::FailingComponent:
    case PatternId::CrashedComponent:
    case PatternId::RemovedComponent:
      return -potential(model, bound_component(model, match, "component"));
    case PatternId::CrashedConnector: {
      const auto& a = bound_component(model, match, "provided");
      const auto& b = bound_component(model, match, "required");
      return -(potential(model, a) + potential(model, b)) / 2.0;
    }
  }
  throw EvaluationError("unknown pattern");
}

double UtilityLedger::value(const Match& m) const {
  auto it = per_match_.find({m.pattern, m.key});
  if (it == per_match_.end()) {
    throw ConsistencyError("ledger has no entry for " + std::string(pattern_name(m.pattern)) +
                           " '" + m.key + "'");
  }
  return it->second;
}

void UtilityLedger::accumulate(double v) {
  // Neumaier summation keeps long incremental runs within 1e-9 of a fresh sum.
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

void UtilityLedger::add(const Match& m, double value) {
  auto [it, inserted] = per_match_.emplace(std::make_pair(m.pattern, m.key), value);
  if (!inserted) {
    throw ConsistencyError("ledger already has " + std::string(pattern_name(m.pattern)) + " '" +
                           m.key + "'");
  }
  accumulate(value);
}

double UtilityLedger::remove(const Match& m) {
  auto it = per_match_.find({m.pattern, m.key});
  if (it == per_match_.end()) {
    throw ConsistencyError("cannot remove unknown match " + std::string(pattern_name(m.pattern)) +
                           " '" + m.key + "'");
  }
  const double v = it->second;
  per_match_.erase(it);
  accumulate(-v);
  return v;
}

void UtilityLedger::clear() {
  per_match_.clear();
  sum_ = 0.0;
  compensation_ = 0.0;
}

double UtilityLedger::recomputed_total() const {
  double s = 0.0;
  for (const auto& [key, v] : per_match_) s += v;
  return s;
}

std::string UtilityLedger::to_csv() const {
  std::ostringstream out;
  out << "pattern,key,value\n";
  for (const auto& [key, v] : per_match_) {
    out << pattern_name(key.first) << ',' << key.second << ',' << format_double(v) << '\n';
  }
  return out.str();
}

double total_utility(const ArchitectureModel& model, const MatchSet& matches, UtilityLedger* ledger) {
  if (ledger) ledger->clear();
  double total = 0.0;
  for (auto p : kAllPatterns) {
    for (const auto& [key, m] : matches.of(p)) {
      const double v = sub_utility(model, m);
      total += v;
      if (ledger) ledger->add(m, v);
    }
  }
  return ledger ? ledger->total() : total;
}

double utility_delta(UtilityLedger& ledger, const std::vector<Match>& removed,
                     const std::vector<Match>& added, const ArchitectureModel& model) {
  for (const auto& m : removed) (void)ledger.value(m);  // validate before mutating
  double delta = 0.0;
  for (const auto& m : removed) delta -= ledger.remove(m);
  for (const auto& m : added) {
    const double v = sub_utility(model, m);
    ledger.add(m, v);
    delta += v;
  }
  return delta;
}

double utility_from_scratch(const ArchitectureModel& model) {
  double total = 0.0;
  for (const auto& [id, c] : model.components()) total += component_contribution(model, c);
  for (const auto& [id, k] : model.connectors()) {
    if (k.state == ConnectorState::Crashed) total += crashed_connector_value(model, k);
  }
  return total;
}

double connectivity_gradient(const ArchitectureModel& model, const Component& c,
                             const ComponentId& exclude) {
  const double unit = c.criticality * reliability_of(model, c);
  double g = 0.0;
  switch (c.state) {
    case ComponentState::Started:
      g = c.max_failure_count() > kFailureThreshold ? 0.0 : unit;
      break;
    case ComponentState::Crashed:
      g = -unit;
      break;
    case ComponentState::Stopped:
    case ComponentState::Removed:
      return 0.0;
  }
  for (const auto& kid : model.attached(c.id)) {
    const auto& k = model.connector(kid);
    if (k.state == ConnectorState::Crashed && k.other_end(c.id) != exclude) g -= unit / 2.0;
  }
  return g;
}

double rule_impact(const ArchitectureModel& model, const RuleApplication& app) {
  if (!match_still_valid(model, app.match)) {
    throw StalenessError(std::string(rule_kind_name(app.rule)) + " for " +
                         std::string(pattern_name(app.match.pattern)) + " '" + app.match.key +
                         "': match no longer holds");
  }
  const bool connector_rule = app.rule == RuleKind::RecreateConnector;
  const bool connector_match = app.match.pattern == PatternId::CrashedConnector;
  if (connector_rule != connector_match || app.match.pattern == PatternId::StartedComponent) {
    throw EvaluationError(std::string(rule_kind_name(app.rule)) + " does not handle " +
                          std::string(pattern_name(app.match.pattern)));
  }
  if (connector_rule) return -sub_utility(model, app.match);

  const auto& t = bound_component(model, app.match, "component");
  double before = component_contribution(model, t);
  for (const auto& kid : model.attached(t.id)) {
    const auto& k = model.connector(kid);
    if (k.state == ConnectorState::Crashed) before += crashed_connector_value(model, k);
  }

  if (app.rule == RuleKind::Restart && t.present()) {
    // Connectors are kept, so only t's own contribution changes.
    const double after = t.criticality * reliability_of(model, t) * model.connectivity(t.id);
    return after - component_contribution(model, t);
  }

  std::string type_name = t.type_name;
  ComponentId self = t.id;
  if (app.rule == RuleKind::Replace) {
    type_name = app.replacement_type;
    if (type_name.empty()) {
      const auto* alt = model.catalog().best_alternative(t.type_name);
      if (alt == nullptr) throw EvaluationError("no alternative for type '" + t.type_name + "'");
      type_name = alt->name;
    }
    self = next_replacement_id(model, t.id);
  }
  const auto& type = model.catalog().type(type_name);
  const double criticality =
      app.rule == RuleKind::HwRedeploy ? model.type_of(t).criticality : t.criticality;

  const auto wiring = planned_wiring(model, t.shop, self, type_name, {t.id});
  double after = criticality * type.reliability * static_cast<double>(wiring.size());

  std::map<ComponentId, int> delta_k;
  for (const auto& k : wiring) ++delta_k[k.other_end(self)];
  for (const auto& kid : model.attached(t.id)) --delta_k[model.connector(kid).other_end(t.id)];
  for (const auto& [n, dk] : delta_k) {
    if (dk != 0) after += dk * connectivity_gradient(model, model.component(n), t.id);
  }
  return after - before;
}

}  // namespace healing
