#include "healing/catalog.hpp"

#include <algorithm>
#include <set>

#include "healing/error.hpp"
#include "json_util.hpp"

namespace healing {

Catalog::Catalog(std::vector<std::string> interface_types, std::vector<ComponentTypeSpec> types,
                 int version)
    : version_(version), interface_types_(std::move(interface_types)), types_(std::move(types)) {}

const ComponentTypeSpec* Catalog::find(std::string_view name) const {
  auto it = std::find_if(types_.begin(), types_.end(),
                         [&](const ComponentTypeSpec& t) { return t.name == name; });
  return it == types_.end() ? nullptr : &*it;
}

const ComponentTypeSpec& Catalog::type(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw LookupError("unknown component type '" + std::string(name) + "'");
}

std::vector<const ComponentTypeSpec*> Catalog::instantiated() const {
  std::vector<const ComponentTypeSpec*> out;
  std::set<std::string> seen;
  for (const auto& t : types_) {
    if (seen.insert(t.slot()).second) out.push_back(&t);
  }
  return out;
}

std::vector<const ComponentTypeSpec*> Catalog::alternatives(std::string_view type_name) const {
  const auto& self = type(type_name);
  std::vector<const ComponentTypeSpec*> out;
  if (self.group.empty()) return out;
  for (const auto& t : types_) {
    if (t.group == self.group && t.name != self.name) out.push_back(&t);
  }
  return out;
}

const ComponentTypeSpec* Catalog::best_alternative(std::string_view type_name) const {
  const ComponentTypeSpec* best = nullptr;
  for (const auto* t : alternatives(type_name)) {
    if (best == nullptr || t->reliability > best->reliability ||
        (t->reliability == best->reliability && t->name < best->name)) {
      best = t;
    }
  }
  return best;
}

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

}  // namespace

void Catalog::validate() const {
  if (types_.empty()) throw ModelError("catalog has no component types");
  const auto known = as_set(interface_types_);
  if (known.size() != interface_types_.size()) throw ModelError("duplicate interface type name");

  std::set<std::string> names;
  for (const auto& t : types_) {
    if (t.name.empty()) throw ModelError("component type with empty name");
    if (!names.insert(t.name).second) throw ModelError("duplicate component type '" + t.name + "'");
    if (!(t.reliability > 0.0 && t.reliability <= 1.0)) {
      throw ModelError("reliability of '" + t.name + "' must lie in (0,1]");
    }
    if (!(t.criticality > 0.0)) throw ModelError("criticality of '" + t.name + "' must be positive");
    if (t.provided.empty()) throw ModelError("component type '" + t.name + "' provides nothing");
    for (const auto* list : {&t.provided, &t.required}) {
      for (const auto& i : *list) {
        if (!known.count(i)) {
          throw ModelError("component type '" + t.name + "' references unknown interface type '" +
                           i + "'");
        }
      }
    }
  }

  for (const auto& t : types_) {
    if (t.group.empty()) continue;
    const auto& head = *std::find_if(types_.begin(), types_.end(),
                                     [&](const ComponentTypeSpec& o) { return o.group == t.group; });
    if (as_set(head.provided) != as_set(t.provided) || as_set(head.required) != as_set(t.required)) {
      throw ModelError("alternatives '" + head.name + "' and '" + t.name +
                       "' do not share interface types");
    }
  }

  std::set<std::string> provided;
  for (const auto* t : instantiated()) provided.insert(t->provided.begin(), t->provided.end());
  for (const auto& t : types_) {
    for (const auto& r : t.required) {
      if (!provided.count(r)) {
        throw ModelError("required interface type '" + r + "' of '" + t.name +
                         "' is not provided by any instantiated component type");
      }
    }
  }
}

Catalog default_catalog() {
  struct Row {
    const char* group;
    const char* name;
    const char* alternative;
    double criticality;
    double reliability;
    double alternative_reliability;
    std::vector<std::string> provided;
    std::vector<std::string> required;
  };
  // clang-format off
  const std::vector<Row> rows = {
    {"authentication", "AuthenticationService", "ThirdPartyAuthenticationService", 10.0, 0.920, 0.934,
     {"IAuthentication"}, {"IUserManagement", "IPersistence"}},
    {"usermanagement", "UserManagementService", "FederatedUserManagementService", 3.73, 0.951, 0.973,
     {"IUserManagement"}, {"IPersistence"}},
    {"persistence", "PersistenceService", "ReplicatedPersistenceService", 8.21, 0.946, 0.984,
     {"IPersistence"}, {}},
    {"inventory", "InventoryService", "ExternalInventoryService", 1.98, 0.988, 0.939,
     {"IInventory"}, {"IPersistence"}},
    {"itemmanagement", "ItemManagementService", "LegacyItemManagementService", 9.32, 0.967, 0.901,
     {"IItemManagement"}, {"IInventory", "IPersistence", "IAuthentication"}},
    {"bidandbuy", "BidAndBuyService", "AuctionGatewayBidAndBuyService", 1.69, 0.927, 0.980,
     {"IBidAndBuy"}, {"IItemManagement", "IAuthentication", "IReputation"}},
    {"reputation", "ReputationService", "ExternalReputationService", 2.21, 0.919, 0.928,
     {"IReputation"}, {"IUserManagement", "IPersistence"}},
    {"query", "QueryService", "IndexedQueryService", 2.99, 0.952, 0.999,
     {"IQuery"}, {"IInventory", "IItemFilter01"}},
    {"buynowfilter", "BuyNowItemFilter", "CachedBuyNowItemFilter", 6.55, 0.939, 0.986,
     {"IItemFilter01"}, {"IItemFilter02"}},
    {"categoryfilter", "CategoryItemFilter", "CachedCategoryItemFilter", 6.01, 0.984, 0.930,
     {"IItemFilter02"}, {"IItemFilter03"}},
    {"commentfilter", "CommentItemFilter", "CachedCommentItemFilter", 7.39, 0.979, 0.988,
     {"IItemFilter03"}, {"IItemFilter04", "IPersistence"}},
    {"futuresalesfilter", "FutureSalesItemFilter", "CachedFutureSalesItemFilter", 7.01, 0.951, 0.999,
     {"IItemFilter04"}, {"IItemFilter05"}},
    {"lastsecondfilter", "LastSecondSalesItemFilter", "CachedLastSecondSalesItemFilter", 3.99, 0.929, 0.965,
     {"IItemFilter05"}, {"IItemFilter06", "IBidAndBuy"}},
    {"pastsalesfilter", "PastSalesItemFilter", "CachedPastSalesItemFilter", 1.98, 0.915, 0.974,
     {"IItemFilter06"}, {"IItemFilter07"}},
    {"recommendationfilter", "RecommendationItemFilter", "CachedRecommendationItemFilter", 3.03, 0.945, 0.973,
     {"IItemFilter07"}, {"IItemFilter08", "IUserManagement"}},
    {"regionfilter", "RegionItemFilter", "CachedRegionItemFilter", 7.21, 0.987, 0.907,
     {"IItemFilter08"}, {"IItemFilter09"}},
    {"sellerreputationfilter", "SellerReputationItemFilter", "CachedSellerReputationItemFilter", 2.73, 0.919, 0.942,
     {"IItemFilter09"}, {"IItemFilter10", "IReputation"}},
    {"bidfilter", "BidItemFilter", "CachedBidItemFilter", 7.33, 0.980, 0.928,
     {"IItemFilter10"}, {"IBidAndBuy"}},
  };
  // clang-format on

  std::vector<std::string> interfaces;
  std::vector<ComponentTypeSpec> types;
  for (const auto& r : rows) {
    for (const auto& i : r.provided) interfaces.push_back(i);
    types.push_back({r.name, r.group, r.reliability, r.criticality, r.provided, r.required});
  }
  for (const auto& r : rows) {
    types.push_back({r.alternative, r.group, r.alternative_reliability, r.criticality, r.provided,
                     r.required});
  }
  return Catalog(std::move(interfaces), std::move(types), 1);
}

Catalog parse_catalog(std::string_view json_text) {
  using detail::json;
  const json doc = detail::parse_json(json_text, "catalog");
  const int version = detail::optional_field<int>(doc, "version", 1, "catalog");
  auto interfaces = detail::required_field<std::vector<std::string>>(doc, "interface_types", "catalog");
  if (!doc.contains("component_types") || !doc["component_types"].is_array()) {
    throw ConfigError("catalog: missing array 'component_types'");
  }
  std::vector<ComponentTypeSpec> types;
  for (const auto& t : doc["component_types"]) {
    ComponentTypeSpec spec;
    spec.name = detail::required_field<std::string>(t, "name", "catalog type");
    const std::string where = "catalog type '" + spec.name + "'";
    spec.group = detail::optional_field<std::string>(t, "group", "", where);
    spec.reliability = detail::required_field<double>(t, "reliability", where);
    spec.criticality = detail::required_field<double>(t, "criticality", where);
    spec.provided = detail::optional_field<std::vector<std::string>>(t, "provides", {}, where);
    spec.required = detail::optional_field<std::vector<std::string>>(t, "requires", {}, where);
    types.push_back(std::move(spec));
  }
  Catalog catalog(std::move(interfaces), std::move(types), version);
  catalog.validate();
  return catalog;
}

Catalog load_catalog(const std::string& path) { return parse_catalog(detail::read_file(path)); }

std::string catalog_to_json_text(const Catalog& catalog) {
  using detail::json;
  json doc;
  doc["version"] = catalog.version();
  doc["interface_types"] = catalog.interface_types();
  json types = json::array();
  for (const auto& t : catalog.component_types()) {
    json j;
    j["name"] = t.name;
    j["group"] = t.group;
    j["reliability"] = t.reliability;
    j["criticality"] = t.criticality;
    j["provides"] = t.provided;
    j["requires"] = t.required;
    types.push_back(std::move(j));
  }
  doc["component_types"] = std::move(types);
  return doc.dump(2) + "\n";
}

}  // namespace healing
