#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "healing/model.hpp"

namespace healing {

enum class ChangeKind : std::uint8_t { Added, Removed, Modified };

/// Before/after snapshots of one element. A component removal keeps an
/// `after` snapshot (the tombstone); a connector removal has none.
struct ComponentChange {
  std::optional<Component> before;
  std::optional<Component> after;
};

struct ConnectorChange {
  std::optional<Connector> before;
  std::optional<Connector> after;
};

struct ElementChange {
  ChangeKind kind = ChangeKind::Modified;
  std::variant<ComponentChange, ConnectorChange> element;

  const ComponentChange* component() const { return std::get_if<ComponentChange>(&element); }
  const ConnectorChange* connector() const { return std::get_if<ConnectorChange>(&element); }
  std::string element_id() const;
};

/// The precise set of element changes made by one operation, from revision
/// `from_revision` to `to_revision`.
struct ChangeDelta {
  std::uint64_t from_revision = 0;
  std::uint64_t to_revision = 0;
  std::vector<ElementChange> changes;

  bool empty() const { return changes.empty(); }
  std::size_t size() const { return changes.size(); }
  std::size_t count(ChangeKind kind) const;
  std::vector<const ElementChange*> added() const { return select(ChangeKind::Added); }
  std::vector<const ElementChange*> removed() const { return select(ChangeKind::Removed); }
  std::vector<const ElementChange*> attribute_changes() const { return select(ChangeKind::Modified); }

  /// Undo: changes reversed in order with before/after swapped.
  ChangeDelta inverse() const;
  /// Concatenate a delta that starts where this one ends.
  void append(const ChangeDelta& next);

 private:
  std::vector<const ElementChange*> select(ChangeKind kind) const;
};

// Fault-side events.
struct CrashComponent { ComponentId component; };
struct StopComponent { ComponentId component; };
struct RecordFailure { ComponentId component; std::string interface_type; int count = 1; };
struct RemoveComponent { ComponentId component; };
struct CrashConnector { ConnectorId connector; };
// Repair-side events.
struct RestartComponent { ComponentId component; };
struct RedeployComponent { ComponentId component; bool heavy = false; };
struct ReplaceComponent { ComponentId component; std::string new_type; };
struct RecreateConnector { ConnectorId connector; };

using ChangeEvent =
    std::variant<CrashComponent, StopComponent, RecordFailure, RemoveComponent, CrashConnector,
                 RestartComponent, RedeployComponent, ReplaceComponent, RecreateConnector>;

std::string describe(const ChangeEvent& event);

/// Throws TransitionError naming both states when the lifecycle graph forbids it.
void check_transition(ComponentState from, ComponentState to);

/// Mutate the model per `event` and return the exact delta.
/// Throws LookupError (unknown target), TransitionError, or ExecutionError.
ChangeDelta apply_change(ArchitectureModel& model, const ChangeEvent& event);

/// Re-apply a recorded delta (e.g. on a copy of the pre-delta model).
void replay(ArchitectureModel& model, const ChangeDelta& delta);
/// Undo `delta`. Deltas must be reverted in reverse order of application;
/// the revision still moves forward.
void revert(ArchitectureModel& model, const ChangeDelta& delta);

/// Connectors a component `self` of `type_name` in `shop` would get when
/// (re)wired: each required interface to a present provider in the shop, and
/// each present requirer of a provided interface. Components in `absent` and
/// connectors attached to them are treated as not present.
std::vector<Connector> planned_wiring(const ArchitectureModel& model, const ShopId& shop,
                                      const ComponentId& self, const std::string& type_name,
                                      const std::vector<ComponentId>& absent);

/// Id the next replacement of `id` receives ("<slot id>~<n>").
ComponentId next_replacement_id(const ArchitectureModel& model, const ComponentId& id);

/// Records element changes against a model; used by apply_change and the
/// rule executor. finish() bumps the revision once and returns the delta.
class DeltaWriter {
 public:
  explicit DeltaWriter(ArchitectureModel& model);

  void put_component(Component after, ChangeKind kind = ChangeKind::Modified);
  void add_component(Component c) { put_component(std::move(c), ChangeKind::Added); }
  void put_connector(Connector after);
  void erase_connector(const ConnectorId& id);
  /// Hard erase; only used to undo a component addition.
  void erase_component(const ComponentId& id);

  ArchitectureModel& model() { return model_; }
  ChangeDelta finish();

 private:
  ArchitectureModel& model_;
  ChangeDelta delta_;
};

}  // namespace healing
