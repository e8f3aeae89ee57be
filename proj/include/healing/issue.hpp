#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "healing/match.hpp"

namespace healing {

enum class IssueKind : std::uint8_t { CF1, CF2, CF3, CF4 };

inline constexpr std::array<IssueKind, 4> kAllIssueKinds = {IssueKind::CF1, IssueKind::CF2,
                                                            IssueKind::CF3, IssueKind::CF4};

std::string_view issue_kind_name(IssueKind kind);
IssueKind parse_issue_kind(std::string_view name);
std::optional<IssueKind> issue_kind_for(PatternId pattern);
PatternId pattern_for(IssueKind kind);

/// Repair rules, in their fixed tie-break order.
enum class RuleKind : std::uint8_t { Restart, LwRedeploy, HwRedeploy, Replace, RecreateConnector };

inline constexpr std::array<RuleKind, 5> kAllRuleKinds = {
    RuleKind::Restart, RuleKind::LwRedeploy, RuleKind::HwRedeploy, RuleKind::Replace,
    RuleKind::RecreateConnector};

std::string_view rule_kind_name(RuleKind kind);
RuleKind parse_rule_kind(std::string_view name);

/// An annotated negative-pattern occurrence.
struct Issue {
  std::string id;
  IssueKind kind = IssueKind::CF1;
  Match match;
  std::string affected_element;
  double utility_drop = 0.0;  // sub-utility of the match at detection, <= 0
  int detected_at_cycle = 0;
  std::uint64_t sequence = 0;  // detection order
};

/// Annotation left by the planner for an issue it scheduled.
struct PlannedRule {
  std::string issue_id;
  RuleKind rule = RuleKind::Restart;
  int cycle = 0;
};

/// Open issues, at most one per (kind, match key).
class IssueRegistry {
 public:
  const Issue& create(IssueKind kind, const Match& match, std::string affected, double drop,
                      int cycle);
  std::optional<Issue> close(const std::string& issue_id);
  std::optional<Issue> close_match(const Match& match);

  const Issue* find(const std::string& issue_id) const;
  const Issue* find_match(const Match& match) const;

  /// Open issues in detection order.
  std::vector<Issue> open() const;
  std::size_t size() const { return by_sequence_.size(); }
  bool empty() const { return by_sequence_.empty(); }

 private:
  std::map<std::uint64_t, Issue> by_sequence_;
  std::map<std::string, std::uint64_t> by_id_;
  std::map<std::pair<PatternId, std::string>, std::uint64_t> by_match_;
  std::uint64_t next_sequence_ = 1;
};

struct Annotations {
  IssueRegistry issues;
  std::vector<PlannedRule> planned;

  void drop_planned(const std::string& issue_id);
};

}  // namespace healing
