#include "healing/change.hpp"

#include <algorithm>

#include "healing/error.hpp"

namespace healing {

std::string ElementChange::element_id() const {
  if (const auto* c = component()) return (c->after ? c->after->id : c->before->id).str();
  const auto* k = connector();
  return (k->after ? k->after->id : k->before->id).str();
}

std::size_t ChangeDelta::count(ChangeKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      changes.begin(), changes.end(), [&](const ElementChange& c) { return c.kind == kind; }));
}

std::vector<const ElementChange*> ChangeDelta::select(ChangeKind kind) const {
  std::vector<const ElementChange*> out;
  for (const auto& c : changes) {
    if (c.kind == kind) out.push_back(&c);
  }
  return out;
}

ChangeDelta ChangeDelta::inverse() const {
  ChangeDelta inv;
  inv.from_revision = to_revision;
  inv.to_revision = to_revision + 1;
  for (auto it = changes.rbegin(); it != changes.rend(); ++it) {
    ElementChange c;
    c.kind = it->kind == ChangeKind::Added     ? ChangeKind::Removed
             : it->kind == ChangeKind::Removed ? ChangeKind::Added
                                               : ChangeKind::Modified;
    if (const auto* comp = it->component()) {
      c.element = ComponentChange{comp->after, comp->before};
    } else {
      const auto* k = it->connector();
      c.element = ConnectorChange{k->after, k->before};
    }
    inv.changes.push_back(std::move(c));
  }
  return inv;
}

void ChangeDelta::append(const ChangeDelta& next) {
  if (changes.empty() && from_revision == to_revision) {
    *this = next;
    return;
  }
  if (next.from_revision != to_revision) {
    throw StalenessError("cannot append delta starting at revision " +
                         std::to_string(next.from_revision) + " to delta ending at " +
                         std::to_string(to_revision));
  }
  changes.insert(changes.end(), next.changes.begin(), next.changes.end());
  to_revision = next.to_revision;
}

DeltaWriter::DeltaWriter(ArchitectureModel& model) : model_(model) {
  delta_.from_revision = model.revision();
}

void DeltaWriter::put_component(Component after, ChangeKind kind) {
  std::optional<Component> before;
  if (const auto* c = model_.find_component(after.id)) before = *c;
  if (!before) kind = ChangeKind::Added;
  delta_.changes.push_back({kind, ComponentChange{before, after}});
  model_.put_component(std::move(after));
}

void DeltaWriter::put_connector(Connector after) {
  std::optional<Connector> before;
  if (const auto* k = model_.find_connector(after.id)) before = *k;
  const auto kind = before ? ChangeKind::Modified : ChangeKind::Added;
  delta_.changes.push_back({kind, ConnectorChange{before, after}});
  model_.put_connector(std::move(after));
}

void DeltaWriter::erase_connector(const ConnectorId& id) {
  const auto& k = model_.connector(id);
  delta_.changes.push_back({ChangeKind::Removed, ConnectorChange{k, std::nullopt}});
  model_.erase_connector(id);
}

void DeltaWriter::erase_component(const ComponentId& id) {
  const auto& c = model_.component(id);
  delta_.changes.push_back({ChangeKind::Removed, ComponentChange{c, std::nullopt}});
  model_.erase_component(id);
}

ChangeDelta DeltaWriter::finish() {
  model_.revision_ = delta_.from_revision + 1;
  delta_.to_revision = model_.revision_;
  return std::move(delta_);
}

void check_transition(ComponentState from, ComponentState to) {
  using S = ComponentState;
  const bool ok = (from == S::Started && to == S::Stopped) ||
                  (from == S::Stopped && to == S::Started) ||
                  (from == S::Started && to == S::Crashed) ||
                  (from != S::Removed && to == S::Removed) ||
                  (from != S::Started && to == S::Started);
  if (!ok) {
    throw TransitionError("illegal lifecycle transition " + std::string(state_name(from)) + " -> " +
                          std::string(state_name(to)));
  }
}

std::vector<Connector> planned_wiring(const ArchitectureModel& model, const ShopId& shop,
                                      const ComponentId& self, const std::string& type_name,
                                      const std::vector<ComponentId>& absent) {
  const auto& type = model.catalog().type(type_name);
  const auto& members = model.shop(shop).component_ids;
  auto counts = [&](const ComponentId& id) {
    if (id == self || std::find(absent.begin(), absent.end(), id) != absent.end()) return false;
    const auto* c = model.find_component(id);
    return c != nullptr && c->present();
  };

  std::vector<Connector> planned;
  for (const auto& r : type.required) {
    for (const auto& id : members) {
      if (!counts(id)) continue;
      const auto& p = model.component(id);
      const bool provides = std::any_of(p.provided.begin(), p.provided.end(),
                                        [&](const ProvidedInterface& pi) { return pi.interface_type == r; });
      if (provides) {
        planned.push_back({connector_id_for(self, r), r, self, id, ConnectorState::Ok});
        break;
      }
    }
  }
  for (const auto& iface : type.provided) {
    for (const auto& id : members) {
      if (!counts(id)) continue;
      const auto& y = model.component(id);
      const bool needs = std::any_of(y.required.begin(), y.required.end(),
                                     [&](const RequiredInterface& ri) { return ri.interface_type == iface; });
      if (!needs) continue;
      const auto cid = connector_id_for(id, iface);
      if (const auto* existing = model.find_connector(cid); existing && counts(existing->provided_side)) {
        continue;  // already served by another provider
      }
      planned.push_back({cid, iface, id, self, ConnectorState::Ok});
    }
  }
  return planned;
}

ComponentId next_replacement_id(const ArchitectureModel& model, const ComponentId& id) {
  const std::string& s = id.str();
  const std::string root = s.substr(0, s.find('~'));
  const std::string prefix = root + "~";
  int highest = 0;
  const auto& c = model.component(id);
  for (const auto& member : model.shop(c.shop).component_ids) {
    const std::string& m = member.str();
    if (m.rfind(prefix, 0) == 0) {
      try {
        highest = std::max(highest, std::stoi(m.substr(prefix.size())));
      } catch (const std::exception&) {
      }
    }
  }
  return ComponentId(prefix + std::to_string(highest + 1));
}

namespace {

const Component& require_component(const ArchitectureModel& model, const ComponentId& id) {
  const auto* c = model.find_component(id);
  if (c == nullptr) throw LookupError("no such component '" + id.str() + "'");
  return *c;
}

void require_not_retired(const Component& c) {
  if (c.retired()) {
    throw TransitionError("component '" + c.id.str() + "' was replaced by '" + c.replaced_by->str() +
                          "'");
  }
}

void reset_failures(Component& c) {
  for (auto& p : c.provided) p.failure_count = 0;
}

void erase_attached(DeltaWriter& w, const ComponentId& id) {
  const auto ids = w.model().attached(id);  // copy; erasing mutates the index
  for (const auto& k : ids) w.erase_connector(k);
}

void rewire(DeltaWriter& w, const Component& c) {
  for (auto& k : planned_wiring(w.model(), c.shop, c.id, c.type_name, {})) w.put_connector(std::move(k));
}

struct Applier {
  ArchitectureModel& model;
  DeltaWriter& w;

  void operator()(const CrashComponent& e) {
    Component c = require_component(model, e.component);
    check_transition(c.state, ComponentState::Crashed);
    c.state = ComponentState::Crashed;
    w.put_component(std::move(c));
  }

  void operator()(const StopComponent& e) {
    Component c = require_component(model, e.component);
    check_transition(c.state, ComponentState::Stopped);
    c.state = ComponentState::Stopped;
    w.put_component(std::move(c));
  }

  void operator()(const RecordFailure& e) {
    Component c = require_component(model, e.component);
    if (e.count < 1) throw ExecutionError("failure count must be positive");
    if (!c.present()) {
      throw TransitionError("cannot record failures on REMOVED component '" + c.id.str() + "'");
    }
    auto it = std::find_if(c.provided.begin(), c.provided.end(),
                           [&](const ProvidedInterface& p) { return p.interface_type == e.interface_type; });
    if (it == c.provided.end()) {
      throw LookupError("component '" + c.id.str() + "' provides no interface '" + e.interface_type + "'");
    }
    it->failure_count += e.count;
    w.put_component(std::move(c));
  }

  void operator()(const RemoveComponent& e) {
    Component c = require_component(model, e.component);
    check_transition(c.state, ComponentState::Removed);
    c.connectivity_at_removal = model.connectivity(c.id);
    c.state = ComponentState::Removed;
    c.replaced_by.reset();
    erase_attached(w, c.id);
    w.put_component(std::move(c), ChangeKind::Removed);
  }

  void operator()(const CrashConnector& e) {
    const auto* k = model.find_connector(e.connector);
    if (k == nullptr) throw LookupError("no such connector '" + e.connector.str() + "'");
    if (k->state != ConnectorState::Ok) {
      throw TransitionError("illegal connector transition CRASHED -> CRASHED");
    }
    Connector next = *k;
    next.state = ConnectorState::Crashed;
    w.put_connector(std::move(next));
  }

  void operator()(const RecreateConnector& e) {
    const auto* k = model.find_connector(e.connector);
    if (k == nullptr) throw LookupError("no such connector '" + e.connector.str() + "'");
    if (k->state != ConnectorState::Crashed) {
      throw TransitionError("illegal connector transition OK -> OK");
    }
    Connector next = *k;
    next.state = ConnectorState::Ok;
    w.put_connector(std::move(next));
  }

  void operator()(const RestartComponent& e) {
    Component c = require_component(model, e.component);
    require_not_retired(c);
    const bool was_removed = c.state == ComponentState::Removed;
    if (c.state != ComponentState::Started) check_transition(c.state, ComponentState::Started);
    c.state = ComponentState::Started;
    c.connectivity_at_removal = 0;
    reset_failures(c);
    w.put_component(c);
    if (was_removed) rewire(w, c);
  }

  void operator()(const RedeployComponent& e) {
    Component c = require_component(model, e.component);
    require_not_retired(c);
    if (c.state != ComponentState::Started) check_transition(c.state, ComponentState::Started);
    erase_attached(w, c.id);
    c.state = ComponentState::Started;
    c.connectivity_at_removal = 0;
    reset_failures(c);
    if (e.heavy) c.criticality = model.type_of(c).criticality;
    w.put_component(c);
    rewire(w, c);
  }

  void operator()(const ReplaceComponent& e) {
    Component old = require_component(model, e.component);
    require_not_retired(old);
    const auto& current = model.type_of(old);
    const auto* next_type = model.catalog().find(e.new_type);
    if (next_type == nullptr) throw LookupError("unknown component type '" + e.new_type + "'");
    if (current.group.empty() || next_type->group != current.group || next_type->name == current.name) {
      throw ExecutionError("'" + e.new_type + "' is not an alternative to '" + current.name + "'");
    }

    const ComponentId fresh_id = next_replacement_id(model, old.id);
    const bool was_present = old.present();
    if (was_present) old.connectivity_at_removal = model.connectivity(old.id);
    erase_attached(w, old.id);
    old.state = ComponentState::Removed;
    old.replaced_by = fresh_id;
    w.put_component(old, was_present ? ChangeKind::Removed : ChangeKind::Modified);

    Component fresh;
    fresh.id = fresh_id;
    fresh.type_name = next_type->name;
    fresh.shop = old.shop;
    fresh.criticality = old.criticality;
    fresh.state = ComponentState::Started;
    for (const auto& p : next_type->provided) fresh.provided.push_back({p, 0});
    for (const auto& r : next_type->required) fresh.required.push_back({r});
    w.add_component(fresh);
    rewire(w, fresh);
  }
};

}  // namespace

ChangeDelta apply_change(ArchitectureModel& model, const ChangeEvent& event) {
  // Validation happens before the first write inside each handler, so a
  // thrown error leaves the model untouched.
  DeltaWriter w(model);
  std::visit(Applier{model, w}, event);
  return w.finish();
}

void replay(ArchitectureModel& model, const ChangeDelta& delta) {
  if (model.revision() != delta.from_revision) {
    throw StalenessError("delta starts at revision " + std::to_string(delta.from_revision) +
                         " but model is at " + std::to_string(model.revision()));
  }
  DeltaWriter w(model);
  for (const auto& c : delta.changes) {
    if (const auto* comp = c.component()) {
      if (comp->after) {
        w.put_component(*comp->after, c.kind);
      } else {
        w.erase_component(comp->before->id);
      }
    } else {
      const auto* k = c.connector();
      if (k->after) {
        w.put_connector(*k->after);
      } else {
        w.erase_connector(k->before->id);
      }
    }
  }
  w.finish();
}

void revert(ArchitectureModel& model, const ChangeDelta& delta) {
  ChangeDelta inv = delta.inverse();
  inv.from_revision = model.revision();
  inv.to_revision = inv.from_revision + 1;
  replay(model, inv);
}

std::string describe(const ChangeEvent& event) {
  struct Namer {
    std::string operator()(const CrashComponent& e) const { return "crash " + e.component.str(); }
    std::string operator()(const StopComponent& e) const { return "stop " + e.component.str(); }
    std::string operator()(const RecordFailure& e) const {
      return "failure x" + std::to_string(e.count) + " " + e.component.str() + "/" + e.interface_type;
    }
    std::string operator()(const RemoveComponent& e) const { return "remove " + e.component.str(); }
    std::string operator()(const CrashConnector& e) const { return "crash-connector " + e.connector.str(); }
    std::string operator()(const RestartComponent& e) const { return "restart " + e.component.str(); }
    std::string operator()(const RedeployComponent& e) const {
      return std::string(e.heavy ? "hw-redeploy " : "lw-redeploy ") + e.component.str();
    }
    std::string operator()(const ReplaceComponent& e) const {
      return "replace " + e.component.str() + " with " + e.new_type;
    }
    std::string operator()(const RecreateConnector& e) const {
      return "recreate-connector " + e.connector.str();
    }
  };
  return std::visit(Namer{}, event);
}

}  // namespace healing
