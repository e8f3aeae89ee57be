#include "healing/patterns.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "healing/error.hpp"

namespace healing {

std::string_view pattern_name(PatternId p) {
  switch (p) {
    case PatternId::StartedComponent: return "P1+";
    case PatternId::FailingComponent: return "P2-";
    case PatternId::CrashedComponent: return "P3-";
    case PatternId::RemovedComponent: return "P4-";
    case PatternId::CrashedConnector: return "P5-";
  }
  return "?";
}

PatternId parse_pattern(std::string_view name) {
  for (auto p : kAllPatterns) {
    if (pattern_name(p) == name) return p;
  }
  throw ConfigError("unknown pattern '" + std::string(name) + "'");
}

Match Match::make(PatternId pattern, std::vector<Binding> bindings) {
  std::sort(bindings.begin(), bindings.end(),
            [](const Binding& a, const Binding& b) { return a.role < b.role; });
  Match m;
  m.pattern = pattern;
  for (const auto& b : bindings) {
    if (!m.key.empty()) m.key += '|';
    m.key += b.element;
  }
  m.bindings = std::move(bindings);
  return m;
}

const std::string& Match::bound(std::string_view role) const {
  static const std::string kNone;
  for (const auto& b : bindings) {
    if (b.role == role) return b.element;
  }
  return kNone;
}

namespace {

bool indexed_role(const std::string& role) { return role != "shop"; }

}  // namespace

void MatchSet::insert(const Match& m) {
  auto& bucket = by_pattern_[static_cast<std::size_t>(m.pattern)];
  if (!bucket.emplace(m.key, m).second) return;
  for (const auto& b : m.bindings) {
    if (indexed_role(b.role)) by_element_[b.element].emplace_back(m.pattern, m.key);
  }
}

bool MatchSet::erase(PatternId pattern, const std::string& key) {
  auto& bucket = by_pattern_[static_cast<std::size_t>(pattern)];
  auto it = bucket.find(key);
  if (it == bucket.end()) return false;
  for (const auto& b : it->second.bindings) {
    if (!indexed_role(b.role)) continue;
    auto e = by_element_.find(b.element);
    if (e == by_element_.end()) continue;
    auto& refs = e->second;
    refs.erase(std::remove(refs.begin(), refs.end(), std::make_pair(pattern, key)), refs.end());
    if (refs.empty()) by_element_.erase(e);
  }
  bucket.erase(it);
  return true;
}

const Match* MatchSet::find(PatternId pattern, const std::string& key) const {
  const auto& bucket = by_pattern_[static_cast<std::size_t>(pattern)];
  auto it = bucket.find(key);
  return it == bucket.end() ? nullptr : &it->second;
}

std::vector<const Match*> MatchSet::for_element(const std::string& element_id) const {
  std::vector<const Match*> out;
  auto it = by_element_.find(element_id);
  if (it == by_element_.end()) return out;
  for (const auto& [pattern, key] : it->second) {
    if (const auto* m = find(pattern, key)) out.push_back(m);
  }
  return out;
}

std::size_t MatchSet::size() const {
  std::size_t n = 0;
  for (const auto& bucket : by_pattern_) n += bucket.size();
  return n;
}

void MatchSet::apply(const MatchDelta& delta) {
  if (revision_ != delta.from_revision) {
    throw StalenessError("match delta starts at revision " + std::to_string(delta.from_revision) +
                         " but match set is at " + std::to_string(revision_));
  }
  for (const auto& m : delta.invalidated) erase(m.pattern, m.key);
  for (const auto& m : delta.added) insert(m);
  revision_ = delta.to_revision;
}

std::string MatchSet::dump() const {
  std::ostringstream out;
  for (auto p : kAllPatterns) {
    for (const auto& [key, m] : of(p)) out << pattern_name(p) << ' ' << key << '\n';
  }
  return out.str();
}

bool MatchSet::same_matches(const MatchSet& other) const {
  for (auto p : kAllPatterns) {
    const auto& a = of(p);
    const auto& b = other.of(p);
    if (a.size() != b.size()) return false;
    if (!std::equal(a.begin(), a.end(), b.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; })) {
      return false;
    }
  }
  return true;
}

std::vector<Match> match_component(const ArchitectureModel& /*model*/, const Component& c) {
  std::vector<Match> out;
  auto make = [&](PatternId p) {
    return Match::make(p, {{"component", c.id.str()}, {"shop", c.shop.str()}});
  };
  switch (c.state) {
    case ComponentState::Started:
      out.push_back(make(PatternId::StartedComponent));
      if (c.max_failure_count() > kFailureThreshold) out.push_back(make(PatternId::FailingComponent));
      break;
    case ComponentState::Crashed:
      out.push_back(make(PatternId::CrashedComponent));
      break;
    case ComponentState::Removed:
      if (!c.replaced_by) out.push_back(make(PatternId::RemovedComponent));
      break;
    case ComponentState::Stopped:
      break;
  }
  return out;
}

std::optional<Match> match_connector(const ArchitectureModel& /*model*/, const Connector& k) {
  if (k.state != ConnectorState::Crashed) return std::nullopt;
  return Match::make(PatternId::CrashedConnector, {{"connector", k.id.str()},
                                                   {"provided", k.provided_side.str()},
                                                   {"required", k.required_side.str()}});
}

MatchSet match_full(const ArchitectureModel& model) {
  MatchSet set;
  for (const auto& [id, c] : model.components()) {
    for (const auto& m : match_component(model, c)) set.insert(m);
  }
  for (const auto& [id, k] : model.connectors()) {
    if (auto m = match_connector(model, k)) set.insert(*m);
  }
  set.set_revision(model.revision());
  return set;
}

namespace {

bool is_component_pattern(PatternId p) { return p != PatternId::CrashedConnector; }

}  // namespace

MatchDelta match_delta(const ArchitectureModel& model, const ChangeDelta& delta,
                       const MatchSet& previous) {
  MatchDelta out;
  out.from_revision = delta.from_revision;
  out.to_revision = delta.to_revision;
  if (previous.revision() != delta.from_revision) {
    throw StalenessError("match set is at revision " + std::to_string(previous.revision()) +
                         " but delta starts at " + std::to_string(delta.from_revision));
  }
  if (model.revision() != delta.to_revision) {
    throw StalenessError("model is at revision " + std::to_string(model.revision()) +
                         " but delta ends at " + std::to_string(delta.to_revision));
  }
  if (delta.empty()) return out;

  std::set<std::string> components;
  std::set<std::string> connectors;
  std::set<std::string> context_changed;
  std::map<std::string, int> net_connectivity;
  // First snapshot per component, compared with the final state below.
  std::map<std::string, const Component*> first_before;

  for (const auto& change : delta.changes) {
    if (const auto* c = change.component()) {
      const std::string id = change.element_id();
      components.insert(id);
      if (!first_before.count(id)) first_before[id] = c->before ? &*c->before : nullptr;
    } else {
      const auto* k = change.connector();
      connectors.insert(change.element_id());
      const int step = (k->before ? 0 : 1) - (k->after ? 0 : 1);
      if (step != 0) {
        const auto& ref = k->after ? *k->after : *k->before;
        net_connectivity[ref.required_side.str()] += step;
        net_connectivity[ref.provided_side.str()] += step;
      }
    }
  }

  for (const auto& [id, before] : first_before) {
    const auto* now = model.find_component(ComponentId(id));
    if (before == nullptr || now == nullptr || before->criticality != now->criticality ||
        before->type_name != now->type_name ||
        before->connectivity_at_removal != now->connectivity_at_removal) {
      context_changed.insert(id);
    }
  }
  for (const auto& [id, net] : net_connectivity) {
    if (net != 0) {
      context_changed.insert(id);
      components.insert(id);
    }
  }
  for (const auto& id : context_changed) {
    const ComponentId cid(id);
    if (model.find_component(cid) == nullptr) continue;
    for (const auto& k : model.attached(cid)) connectors.insert(k.str());
  }
  out.examined = components.size() + connectors.size();

  for (const auto& id : components) {
    std::vector<const Match*> olds;
    for (const auto* m : previous.for_element(id)) {
      if (is_component_pattern(m->pattern)) olds.push_back(m);
    }
    std::vector<Match> news;
    if (const auto* c = model.find_component(ComponentId(id))) news = match_component(model, *c);
    const bool refresh = context_changed.count(id) > 0;

    for (const auto* old : olds) {
      const bool kept = std::find(news.begin(), news.end(), *old) != news.end();
      if (!kept) {
        out.invalidated.push_back(*old);
      } else if (refresh) {
        out.invalidated.push_back(*old);
        out.added.push_back(*old);
      }
    }
    for (auto& m : news) {
      const bool existed = std::any_of(olds.begin(), olds.end(), [&](const Match* o) { return *o == m; });
      if (!existed) out.added.push_back(std::move(m));
    }
  }

  for (const auto& id : connectors) {
    const Match* old = nullptr;
    for (const auto* m : previous.for_element(id)) {
      if (m->pattern == PatternId::CrashedConnector && m->bound("connector") == id) old = m;
    }
    std::optional<Match> now;
    if (const auto* k = model.find_connector(ConnectorId(id))) now = match_connector(model, *k);

    if (old && !now) {
      out.invalidated.push_back(*old);
    } else if (!old && now) {
      out.added.push_back(std::move(*now));
    } else if (old && now) {
      if (context_changed.count(now->bound("provided")) || context_changed.count(now->bound("required"))) {
        out.invalidated.push_back(*old);
        out.added.push_back(std::move(*now));
      }
    }
  }
  return out;
}

bool match_still_valid(const ArchitectureModel& model, const Match& match) {
  if (match.pattern == PatternId::CrashedConnector) {
    const auto* k = model.find_connector(ConnectorId(match.bound("connector")));
    if (k == nullptr) return false;
    auto m = match_connector(model, *k);
    return m && *m == match;
  }
  const auto* c = model.find_component(ComponentId(match.bound("component")));
  if (c == nullptr) return false;
  const auto current = match_component(model, *c);
  return std::find(current.begin(), current.end(), match) != current.end();
}

}  // namespace healing
