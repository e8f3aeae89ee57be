#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace healing {

/// A component type. Types sharing a non-empty `group` are interchangeable
/// replacements; the first type listed for a group is the one instantiated
/// in every shop.
struct ComponentTypeSpec {
  std::string name;
  std::string group;
  double reliability = 1.0;
  double criticality = 1.0;  // default criticality of instances
  std::vector<std::string> provided;
  std::vector<std::string> required;

  /// Slot name used in component ids; stable across replacements.
  const std::string& slot() const { return group.empty() ? name : group; }

  friend bool operator==(const ComponentTypeSpec&, const ComponentTypeSpec&) = default;
};

class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<std::string> interface_types, std::vector<ComponentTypeSpec> types,
          int version = 1);

  int version() const { return version_; }
  const std::vector<std::string>& interface_types() const { return interface_types_; }
  const std::vector<ComponentTypeSpec>& component_types() const { return types_; }
  bool empty() const { return types_.empty(); }

  const ComponentTypeSpec& type(std::string_view name) const;
  const ComponentTypeSpec* find(std::string_view name) const;

  /// One type per slot, in catalog order.
  std::vector<const ComponentTypeSpec*> instantiated() const;
  std::vector<const ComponentTypeSpec*> alternatives(std::string_view type_name) const;
  /// Most reliable alternative (ties by name), or nullptr.
  const ComponentTypeSpec* best_alternative(std::string_view type_name) const;

  /// Throws ModelError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const Catalog&, const Catalog&) = default;

 private:
  int version_ = 1;
  std::vector<std::string> interface_types_;
  std::vector<ComponentTypeSpec> types_;
};

/// Built-in 18-slot marketplace catalog; identical to config/catalog.json.
Catalog default_catalog();

Catalog parse_catalog(std::string_view json_text);
Catalog load_catalog(const std::string& path);
std::string catalog_to_json_text(const Catalog& catalog);

}  // namespace healing
