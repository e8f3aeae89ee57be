#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace healing {

/// String-backed identifier, tagged so shop/component/connector ids do not mix.
template <class Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const Id&, const Id&) = default;
  friend auto operator<=>(const Id& a, const Id& b) { return a.value_.compare(b.value_) <=> 0; }

  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value_; }

 private:
  std::string value_;
};

using ShopId = Id<struct ShopTag>;
using ComponentId = Id<struct ComponentTag>;
using ConnectorId = Id<struct ConnectorTag>;

}  // namespace healing

template <class Tag>
struct std::hash<healing::Id<Tag>> {
  std::size_t operator()(const healing::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
