#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "healing/catalog.hpp"
#include "healing/ids.hpp"
#include "healing/issue.hpp"

namespace healing {

enum class ComponentState : std::uint8_t { Started, Stopped, Crashed, Removed };
enum class ConnectorState : std::uint8_t { Ok, Crashed };

std::string_view state_name(ComponentState s);
std::string_view state_name(ConnectorState s);

struct ProvidedInterface {
  std::string interface_type;
  int failure_count = 0;  // observed exceptions since the last repair
  friend bool operator==(const ProvidedInterface&, const ProvidedInterface&) = default;
};

struct RequiredInterface {
  std::string interface_type;
  friend bool operator==(const RequiredInterface&, const RequiredInterface&) = default;
};

struct Component {
  ComponentId id;
  std::string type_name;
  ShopId shop;
  double criticality = 1.0;
  ComponentState state = ComponentState::Started;
  std::vector<ProvidedInterface> provided;
  std::vector<RequiredInterface> required;
  // Tombstone data, meaningful only while state == Removed.
  int connectivity_at_removal = 0;
  std::optional<ComponentId> replaced_by;

  bool present() const { return state != ComponentState::Removed; }
  bool retired() const { return state == ComponentState::Removed && replaced_by.has_value(); }
  int max_failure_count() const;

  friend bool operator==(const Component&, const Component&) = default;
};

/// Links a required interface to a provided interface of the same type.
/// Ids are "<requiring component>:<interface type>".
struct Connector {
  ConnectorId id;
  std::string interface_type;
  ComponentId required_side;
  ComponentId provided_side;
  ConnectorState state = ConnectorState::Ok;

  const ComponentId& other_end(const ComponentId& c) const {
    return c == required_side ? provided_side : required_side;
  }
  friend bool operator==(const Connector&, const Connector&) = default;
};

ConnectorId connector_id_for(const ComponentId& requiring, std::string_view interface_type);

struct Shop {
  ShopId id;
  std::vector<ComponentId> component_ids;
  friend bool operator==(const Shop&, const Shop&) = default;
};

class DeltaWriter;

/// The architectural runtime model: shops, components (including tombstones),
/// connectors and the analysis/planning annotations.
///
/// Mutation goes through apply_change / replay / revert, which record every
/// element change in a ChangeDelta and bump the revision counter once.
class ArchitectureModel {
 public:
  ArchitectureModel() = default;
  explicit ArchitectureModel(Catalog catalog);

  const Catalog& catalog() const { return catalog_; }
  const std::vector<Shop>& shops() const { return shops_; }
  const std::map<ComponentId, Component>& components() const { return components_; }
  const std::map<ConnectorId, Connector>& connectors() const { return connectors_; }

  const Shop& shop(const ShopId& id) const;
  const Component& component(const ComponentId& id) const;
  const Component* find_component(const ComponentId& id) const;
  const Connector& connector(const ConnectorId& id) const;
  const Connector* find_connector(const ConnectorId& id) const;
  const ComponentTypeSpec& type_of(const Component& c) const { return catalog_.type(c.type_name); }

  /// Connectors with an endpoint on the component.
  const std::set<ConnectorId>& attached(const ComponentId& id) const;
  int connectivity(const ComponentId& id) const;

  std::uint64_t revision() const { return revision_; }

  Annotations& annotations() { return annotations_; }
  const Annotations& annotations() const { return annotations_; }

  /// Architecture equality; revision and annotations are ignored.
  bool same_architecture(const ArchitectureModel& other) const;

  // Construction helpers used by build_architecture; they do not record deltas.
  void add_shop(Shop shop);
  void insert_component(Component c);
  void insert_connector(Connector k);

 private:
  friend class DeltaWriter;

  void put_component(Component c);
  void put_connector(Connector k);
  void erase_connector(const ConnectorId& id);
  void erase_component(const ComponentId& id);
  Shop& mutable_shop(const ShopId& id);

  Catalog catalog_;
  std::vector<Shop> shops_;
  std::map<ShopId, std::size_t> shop_index_;
  std::map<ComponentId, Component> components_;
  std::map<ConnectorId, Connector> connectors_;
  std::map<ComponentId, std::set<ConnectorId>> attached_;
  std::uint64_t revision_ = 0;
  Annotations annotations_;
};

struct BuildOptions {
  int shop_count = 1;
  std::uint64_t seed = 0;
  /// Relative spread of per-instance criticality around the catalog default;
  /// 0 means every instance gets exactly the catalog value.
  double criticality_jitter = 0.0;
};

/// One STARTED component per catalog slot per shop, wired so each required
/// interface has exactly one connector to a provider in the same shop.
ArchitectureModel build_architecture(const Catalog& catalog, const BuildOptions& options);
ArchitectureModel build_architecture(int shop_count, const Catalog& catalog, std::uint64_t seed);

int connectivity(const ArchitectureModel& model, const ComponentId& id);

/// Referential integrity and connector invariants; empty when valid.
std::vector<std::string> validate_model(const ArchitectureModel& model);

/// Canonical, diff-stable text form used in golden tests.
std::string to_canonical_text(const ArchitectureModel& model);

}  // namespace healing
