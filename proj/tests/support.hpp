#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "healing/analyzer.hpp"
#include "healing/catalog.hpp"
#include "healing/change.hpp"
#include "healing/model.hpp"
#include "healing/patterns.hpp"

namespace testing {

using namespace healing;

// A hub (criticality 2, reliability 0.5) serving three leaves. In one shop
// the hub has connectivity 3, so its P1+ value is 3.0. FastHub is the
// more reliable alternative (0.8).
inline Catalog hub_catalog() {
  std::vector<ComponentTypeSpec> types{
      {"Hub", "hub", 0.5, 2.0, {"IHub"}, {}},
      {"LeafA", "leafa", 1.0, 1.0, {"ILeafA"}, {"IHub"}},
      {"LeafB", "leafb", 1.0, 1.0, {"ILeafB"}, {"IHub"}},
      {"LeafC", "leafc", 1.0, 1.0, {"ILeafC"}, {"IHub"}},
      {"FastHub", "hub", 0.8, 2.0, {"IHub"}, {}},
  };
  return Catalog({"IHub", "ILeafA", "ILeafB", "ILeafC"}, types);
}

// Two components linked by one connector, P1+ values 3.0 and 5.0.
inline Catalog pair_catalog() {
  std::vector<ComponentTypeSpec> types{
      {"Alpha", "alpha", 1.0, 3.0, {"IAlpha"}, {}},
      {"Beta", "beta", 1.0, 5.0, {"IBeta"}, {"IAlpha"}},
  };
  return Catalog({"IAlpha", "IBeta"}, types);
}

// Independent connectivity: a scan over every connector.
inline int reference_connectivity(const ArchitectureModel& model, const ComponentId& id) {
  int k = 0;
  for (const auto& [kid, conn] : model.connectors()) {
    if (conn.required_side == id) ++k;
    if (conn.provided_side == id) ++k;
  }
  return k;
}

// Independent total-utility evaluation written from the sub-function definitions.
inline double reference_utility(const ArchitectureModel& model) {
  auto reliability = [&](const Component& c) {
    for (const auto& t : model.catalog().component_types()) {
      if (t.name == c.type_name) return t.reliability;
    }
    return 0.0;
  };
  std::map<ComponentId, int> degree;
  for (const auto& [kid, conn] : model.connectors()) {
    ++degree[conn.required_side];
    ++degree[conn.provided_side];
  }
  auto value = [&](const Component& c) {
    const int k = c.state == ComponentState::Removed ? c.connectivity_at_removal : degree[c.id];
    return c.criticality * reliability(c) * k;
  };
  double total = 0.0;
  for (const auto& [id, c] : model.components()) {
    int worst = 0;
    for (const auto& p : c.provided) worst = std::max(worst, p.failure_count);
    if (c.state == ComponentState::Started) {
      total += value(c);
      if (worst > 4) total -= value(c);
    } else if (c.state == ComponentState::Crashed) {
      total -= value(c);
    } else if (c.state == ComponentState::Removed && !c.replaced_by) {
      total -= value(c);
    }
  }
  for (const auto& [id, k] : model.connectors()) {
    if (k.state == ConnectorState::Crashed) {
      total -= (value(model.component(k.provided_side)) + value(model.component(k.required_side))) / 2.0;
    }
  }
  return total;
}

inline bool near(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<Match> negatives(const MatchSet& set) {
  std::vector<Match> out;
  for (auto p : kAllPatterns) {
    if (polarity(p) == Polarity::Negative) {
      for (const auto& [key, m] : set.of(p)) out.push_back(m);
    }
  }
  return out;
}

// Opens an issue for every current negative match.
inline std::vector<Issue> open_issues(ArchitectureModel& model) {
  analyze(model, negatives(match_full(model)), {}, model.annotations().issues, 0);
  return model.annotations().issues.open();
}

inline const Issue& issue_on(const ArchitectureModel& model, const std::string& element) {
  for (const auto& i : model.annotations().issues.open()) {
    if (i.affected_element == element) return *model.annotations().issues.find(i.id);
  }
  throw std::runtime_error("no open issue on " + element);
}

inline ChangeDelta fail_interface(ArchitectureModel& model, const std::string& component, int count = 5) {
  const auto& c = model.component(ComponentId(component));
  return apply_change(model, RecordFailure{c.id, c.provided.front().interface_type, count});
}

template <class Map>
const typename Map::mapped_type* random_entry(const Map& map, std::mt19937_64& rng) {
  if (map.empty()) return nullptr;
  auto it = map.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(rng() % map.size()));
  return &it->second;
}

// A random legal change event, or nullopt if the draw found no target.
inline std::optional<ChangeEvent> random_event(const ArchitectureModel& model, std::mt19937_64& rng) {
  const auto* c = random_entry(model.components(), rng);
  const auto* k = random_entry(model.connectors(), rng);
  switch (rng() % 10) {
    case 0:
      if (c && c->state == ComponentState::Started) return CrashComponent{c->id};
      break;
    case 1:
      if (c && c->state == ComponentState::Started) return StopComponent{c->id};
      break;
    case 2:
    case 3:
      if (c && c->present() && !c->provided.empty()) {
        const auto& p = c->provided[rng() % c->provided.size()];
        return RecordFailure{c->id, p.interface_type, 1 + static_cast<int>(rng() % 3)};
      }
      break;
    case 4:
      if (c && c->present()) return RemoveComponent{c->id};
      break;
    case 5:
      if (k && k->state == ConnectorState::Ok) return CrashConnector{k->id};
      break;
    case 6:
      if (c && !c->retired()) return RestartComponent{c->id};
      break;
    case 7:
      if (c && !c->retired()) return RedeployComponent{c->id, (rng() & 1) != 0};
      break;
    case 8:
      if (c && !c->retired()) {
        if (const auto* alt = model.catalog().best_alternative(c->type_name)) {
          return ReplaceComponent{c->id, alt->name};
        }
      }
      break;
    case 9:
      if (k && k->state == ConnectorState::Crashed) return RecreateConnector{k->id};
      break;
  }
  return std::nullopt;
}

inline std::string source_path(const std::string& rel) { return std::string(HEALING_SOURCE_DIR) + "/" + rel; }

}  // namespace testing
