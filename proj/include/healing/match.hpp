#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace healing {

/// The built-in, closed pattern set.
enum class PatternId : std::uint8_t {
  StartedComponent,  // P1+  started component associated to a shop
  FailingComponent,  // P2-  started component, some provided interface with > 4 failures (CF2)
  CrashedComponent,  // P3-  crashed component (CF1)
  RemovedComponent,  // P4-  unplanned removal, tombstone not replaced (CF3)
  CrashedConnector,  // P5-  crashed connector (CF4)
};

inline constexpr std::size_t kPatternCount = 5;
inline constexpr std::array<PatternId, kPatternCount> kAllPatterns = {
    PatternId::StartedComponent, PatternId::FailingComponent, PatternId::CrashedComponent,
    PatternId::RemovedComponent, PatternId::CrashedConnector};

enum class Polarity { Positive, Negative };

constexpr Polarity polarity(PatternId p) {
  return p == PatternId::StartedComponent ? Polarity::Positive : Polarity::Negative;
}

std::string_view pattern_name(PatternId p);
PatternId parse_pattern(std::string_view name);

struct Binding {
  std::string role;
  std::string element;
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// An occurrence of a pattern. `bindings` are sorted by role name and `key`
/// joins the bound ids in that order, so equality is (pattern, key).
struct Match {
  PatternId pattern = PatternId::StartedComponent;
  std::vector<Binding> bindings;
  std::string key;

  static Match make(PatternId pattern, std::vector<Binding> bindings);

  /// Element bound to `role`, or empty.
  const std::string& bound(std::string_view role) const;

  friend bool operator==(const Match& a, const Match& b) {
    return a.pattern == b.pattern && a.key == b.key;
  }
};

}  // namespace healing
