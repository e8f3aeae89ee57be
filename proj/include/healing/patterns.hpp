#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "healing/change.hpp"
#include "healing/match.hpp"
#include "healing/model.hpp"

namespace healing {

/// More than this many failures on one provided interface is a CF2 issue.
inline constexpr int kFailureThreshold = 4;

/// Net match changes for one ChangeDelta. Apply `invalidated` first, then
/// `added`: a match whose key survives but whose sub-utility context changed
/// appears in both lists.
struct MatchDelta {
  std::vector<Match> added;
  std::vector<Match> invalidated;
  std::uint64_t from_revision = 0;
  std::uint64_t to_revision = 0;
  std::size_t examined = 0;  // candidate elements inspected
};

/// M_i(G) for every built-in pattern, indexed by key and by bound element id.
class MatchSet {
 public:
  void insert(const Match& m);
  bool erase(PatternId pattern, const std::string& key);
  const Match* find(PatternId pattern, const std::string& key) const;
  bool contains(const Match& m) const { return find(m.pattern, m.key) != nullptr; }

  const std::map<std::string, Match>& of(PatternId pattern) const {
    return by_pattern_[static_cast<std::size_t>(pattern)];
  }
  /// Matches binding a component or connector id.
  std::vector<const Match*> for_element(const std::string& element_id) const;

  std::size_t size() const;
  std::uint64_t revision() const { return revision_; }
  void set_revision(std::uint64_t r) { revision_ = r; }

  void apply(const MatchDelta& delta);

  /// Canonical listing, one "<pattern> <key>" line per match.
  std::string dump() const;

  /// Key-set equality per pattern.
  bool same_matches(const MatchSet& other) const;

 private:
  std::array<std::map<std::string, Match>, kPatternCount> by_pattern_;
  std::unordered_map<std::string, std::vector<std::pair<PatternId, std::string>>> by_element_;
  std::uint64_t revision_ = 0;
};

/// Component-anchored matches (P1+..P4-) of one component.
std::vector<Match> match_component(const ArchitectureModel& model, const Component& c);
/// The CF4 match of a connector, if crashed.
std::optional<Match> match_connector(const ArchitectureModel& model, const Connector& k);

MatchSet match_full(const ArchitectureModel& model);

/// Incremental update. Touches only the elements named in the delta, the
/// endpoints whose connectivity changed, and their attached connectors.
/// Throws StalenessError if `previous` or `model` is not at the delta's revisions.
MatchDelta match_delta(const ArchitectureModel& model, const ChangeDelta& delta,
                       const MatchSet& previous);

/// Whether `match` still occurs in the model (local re-evaluation).
bool match_still_valid(const ArchitectureModel& model, const Match& match);

}  // namespace healing
