#include "healing/model.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

#include "healing/error.hpp"

namespace healing {

std::string_view state_name(ComponentState s) {
  switch (s) {
    case ComponentState::Started: return "STARTED";
    case ComponentState::Stopped: return "STOPPED";
    case ComponentState::Crashed: return "CRASHED";
    case ComponentState::Removed: return "REMOVED";
  }
  return "?";
}

std::string_view state_name(ConnectorState s) {
  return s == ConnectorState::Ok ? "OK" : "CRASHED";
}

int Component::max_failure_count() const {
  int m = 0;
  for (const auto& p : provided) m = std::max(m, p.failure_count);
  return m;
}

ConnectorId connector_id_for(const ComponentId& requiring, std::string_view interface_type) {
  std::string id = requiring.str();
  id += ':';
  id += interface_type;
  return ConnectorId(std::move(id));
}

ArchitectureModel::ArchitectureModel(Catalog catalog) : catalog_(std::move(catalog)) {}

const Shop& ArchitectureModel::shop(const ShopId& id) const {
  auto it = shop_index_.find(id);
  if (it == shop_index_.end()) throw LookupError("unknown shop '" + id.str() + "'");
  return shops_[it->second];
}

Shop& ArchitectureModel::mutable_shop(const ShopId& id) {
  auto it = shop_index_.find(id);
  if (it == shop_index_.end()) throw LookupError("unknown shop '" + id.str() + "'");
  return shops_[it->second];
}

const Component* ArchitectureModel::find_component(const ComponentId& id) const {
  auto it = components_.find(id);
  return it == components_.end() ? nullptr : &it->second;
}

const Component& ArchitectureModel::component(const ComponentId& id) const {
  if (const auto* c = find_component(id)) return *c;
  throw LookupError("unknown component '" + id.str() + "'");
}

const Connector* ArchitectureModel::find_connector(const ConnectorId& id) const {
  auto it = connectors_.find(id);
  return it == connectors_.end() ? nullptr : &it->second;
}

const Connector& ArchitectureModel::connector(const ConnectorId& id) const {
  if (const auto* k = find_connector(id)) return *k;
  throw LookupError("unknown connector '" + id.str() + "'");
}

const std::set<ConnectorId>& ArchitectureModel::attached(const ComponentId& id) const {
  static const std::set<ConnectorId> kNone;
  auto it = attached_.find(id);
  if (it != attached_.end()) return it->second;
  if (!components_.count(id)) throw LookupError("unknown component '" + id.str() + "'");
  return kNone;
}

int ArchitectureModel::connectivity(const ComponentId& id) const {
  return static_cast<int>(attached(id).size());
}

bool ArchitectureModel::same_architecture(const ArchitectureModel& other) const {
  return catalog_ == other.catalog_ && shops_ == other.shops_ &&
         components_ == other.components_ && connectors_ == other.connectors_;
}

void ArchitectureModel::add_shop(Shop shop) {
  if (shop_index_.count(shop.id)) throw ModelError("duplicate shop '" + shop.id.str() + "'");
  shop_index_.emplace(shop.id, shops_.size());
  shops_.push_back(std::move(shop));
}

void ArchitectureModel::insert_component(Component c) {
  if (components_.count(c.id)) throw ModelError("duplicate component '" + c.id.str() + "'");
  put_component(std::move(c));
}

void ArchitectureModel::insert_connector(Connector k) {
  if (connectors_.count(k.id)) throw ModelError("duplicate connector '" + k.id.str() + "'");
  put_connector(std::move(k));
}

void ArchitectureModel::put_component(Component c) {
  auto it = components_.find(c.id);
  if (it == components_.end()) {
    auto& shop = mutable_shop(c.shop);
    shop.component_ids.push_back(c.id);
    components_.emplace(c.id, std::move(c));
  } else {
    it->second = std::move(c);
  }
}

void ArchitectureModel::erase_component(const ComponentId& id) {
  auto it = components_.find(id);
  if (it == components_.end()) return;
  auto& ids = mutable_shop(it->second.shop).component_ids;
  ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
  attached_.erase(id);
  components_.erase(it);
}

void ArchitectureModel::put_connector(Connector k) {
  if (connectors_.count(k.id)) erase_connector(k.id);
  attached_[k.required_side].insert(k.id);
  attached_[k.provided_side].insert(k.id);
  connectors_.emplace(k.id, std::move(k));
}

void ArchitectureModel::erase_connector(const ConnectorId& id) {
  auto it = connectors_.find(id);
  if (it == connectors_.end()) return;
  for (const auto* end : {&it->second.required_side, &it->second.provided_side}) {
    auto a = attached_.find(*end);
    if (a != attached_.end()) {
      a->second.erase(id);
      if (a->second.empty()) attached_.erase(a);
    }
  }
  connectors_.erase(it);
}

int connectivity(const ArchitectureModel& model, const ComponentId& id) {
  return model.connectivity(id);
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ArchitectureModel build_architecture(const Catalog& catalog, const BuildOptions& options) {
  if (options.shop_count < 0) throw ModelError("shop count must be non-negative");
  catalog.validate();
  ArchitectureModel model(catalog);
  std::mt19937_64 rng(options.seed);
  const auto types = catalog.instantiated();

  for (int s = 1; s <= options.shop_count; ++s) {
    const ShopId shop_id("s" + std::to_string(s));
    model.add_shop(Shop{shop_id, {}});
    std::vector<const Component*> members;
    for (const auto* type : types) {
      Component c;
      c.id = ComponentId(shop_id.str() + "." + type->slot());
      c.type_name = type->name;
      c.shop = shop_id;
      const double u = unit_uniform(rng);
      c.criticality = type->criticality * (1.0 + options.criticality_jitter * (2.0 * u - 1.0));
      for (const auto& p : type->provided) c.provided.push_back({p, 0});
      for (const auto& r : type->required) c.required.push_back({r});
      model.insert_component(std::move(c));
    }
    for (const auto& id : model.shop(shop_id).component_ids) members.push_back(&model.component(id));

    for (const auto* c : members) {
      for (const auto& r : c->required) {
        auto provider = std::find_if(members.begin(), members.end(), [&](const Component* p) {
          return p != c && std::any_of(p->provided.begin(), p->provided.end(),
                                       [&](const ProvidedInterface& pi) {
                                         return pi.interface_type == r.interface_type;
                                       });
        });
        if (provider == members.end()) {
          throw ModelError("dangling required interface type '" + r.interface_type + "'");
        }
        model.insert_connector(Connector{connector_id_for(c->id, r.interface_type),
                                         r.interface_type, c->id, (*provider)->id,
                                         ConnectorState::Ok});
      }
    }
  }
  return model;
}

ArchitectureModel build_architecture(int shop_count, const Catalog& catalog, std::uint64_t seed) {
  return build_architecture(catalog, BuildOptions{shop_count, seed, 0.0});
}

std::vector<std::string> validate_model(const ArchitectureModel& model) {
  std::vector<std::string> problems;
  auto fail = [&](std::string msg) { problems.push_back(std::move(msg)); };

  std::map<ComponentId, int> listed;
  for (const auto& shop : model.shops()) {
    for (const auto& id : shop.component_ids) {
      ++listed[id];
      const auto* c = model.find_component(id);
      if (c == nullptr) {
        fail("shop " + shop.id.str() + " lists unknown component " + id.str());
      } else if (c->shop != shop.id) {
        fail("component " + id.str() + " listed in foreign shop " + shop.id.str());
      }
    }
  }

  std::size_t attached_total = 0;
  for (const auto& [id, c] : model.components()) {
    if (listed[id] != 1) fail("component " + id.str() + " not listed exactly once in its shop");
    if (model.catalog().find(c.type_name) == nullptr) {
      fail("component " + id.str() + " has unknown type " + c.type_name);
    }
    if (!(c.criticality > 0.0)) fail("component " + id.str() + " has non-positive criticality");
    if (c.replaced_by && model.find_component(*c.replaced_by) == nullptr) {
      fail("component " + id.str() + " replaced by unknown " + c.replaced_by->str());
    }
    if (c.replaced_by && c.state != ComponentState::Removed) {
      fail("component " + id.str() + " is replaced but not removed");
    }
    const auto& att = model.attached(id);
    if (!c.present() && !att.empty()) fail("removed component " + id.str() + " has connectors");
    for (const auto& kid : att) {
      const auto* k = model.find_connector(kid);
      if (k == nullptr || (k->required_side != id && k->provided_side != id)) {
        fail("attachment index of " + id.str() + " is inconsistent");
      }
    }
    attached_total += att.size();
  }

  for (const auto& [id, k] : model.connectors()) {
    const auto* req = model.find_component(k.required_side);
    const auto* prov = model.find_component(k.provided_side);
    if (req == nullptr || prov == nullptr) {
      fail("connector " + id.str() + " has a dangling endpoint");
      continue;
    }
    if (!req->present() || !prov->present()) fail("connector " + id.str() + " touches a removed component");
    if (id != connector_id_for(k.required_side, k.interface_type)) {
      fail("connector " + id.str() + " has a non-canonical id");
    }
    const bool req_ok = std::any_of(req->required.begin(), req->required.end(),
                                    [&](const RequiredInterface& r) { return r.interface_type == k.interface_type; });
    const bool prov_ok = std::any_of(prov->provided.begin(), prov->provided.end(),
                                     [&](const ProvidedInterface& p) { return p.interface_type == k.interface_type; });
    if (!req_ok || !prov_ok) fail("connector " + id.str() + " links mismatched interface types");
    if (!model.attached(k.required_side).count(id) || !model.attached(k.provided_side).count(id)) {
      fail("connector " + id.str() + " missing from attachment index");
    }
  }
  if (attached_total != 2 * model.connectors().size()) {
    fail("sum of connectivity differs from twice the connector count");
  }
  return problems;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string to_canonical_text(const ArchitectureModel& model) {
  std::ostringstream out;
  out << "healing-model v1\n";
  for (const auto& shop : model.shops()) {
    out << "shop " << shop.id << " components=" << shop.component_ids.size() << "\n";
  }
  for (const auto& [id, c] : model.components()) {
    out << "component " << id << " type=" << c.type_name << " shop=" << c.shop
        << " criticality=" << format_double(c.criticality) << " state=" << state_name(c.state)
        << "\n";
    for (const auto& p : c.provided) {
      out << "  provided " << p.interface_type << " failures=" << p.failure_count << "\n";
    }
    for (const auto& r : c.required) out << "  required " << r.interface_type << "\n";
    if (c.state == ComponentState::Removed) {
      out << "  tombstone connectivity=" << c.connectivity_at_removal
          << " replaced_by=" << (c.replaced_by ? c.replaced_by->str() : "-") << "\n";
    }
  }
  for (const auto& [id, k] : model.connectors()) {
    out << "connector " << id << " type=" << k.interface_type << " required=" << k.required_side
        << " provided=" << k.provided_side << " state=" << state_name(k.state) << "\n";
  }
  return out.str();
}

}  // namespace healing
