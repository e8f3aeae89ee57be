#include "healing/analyzer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "healing/error.hpp"
#include "healing/utility.hpp"

namespace healing {

std::string_view issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::CF1: return "CF1";
    case IssueKind::CF2: return "CF2";
    case IssueKind::CF3: return "CF3";
    case IssueKind::CF4: return "CF4";
  }
  return "?";
}

IssueKind parse_issue_kind(std::string_view name) {
  for (auto k : kAllIssueKinds) {
    if (issue_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown issue kind '" + std::string(name) + "' (expected CF1, CF2, CF3 or CF4)");
}

std::optional<IssueKind> issue_kind_for(PatternId pattern) {
  switch (pattern) {
    case PatternId::FailingComponent: return IssueKind::CF2;
    case PatternId::CrashedComponent: return IssueKind::CF1;
    case PatternId::RemovedComponent: return IssueKind::CF3;
    case PatternId::CrashedConnector: return IssueKind::CF4;
    case PatternId::StartedComponent: break;
  }
  return std::nullopt;
}

PatternId pattern_for(IssueKind kind) {
  switch (kind) {
    case IssueKind::CF1: return PatternId::CrashedComponent;
    case IssueKind::CF2: return PatternId::FailingComponent;
    case IssueKind::CF3: return PatternId::RemovedComponent;
    case IssueKind::CF4: return PatternId::CrashedConnector;
  }
  return PatternId::CrashedComponent;
}

std::string_view rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::Restart: return "Restart";
    case RuleKind::LwRedeploy: return "LwRedeploy";
    case RuleKind::HwRedeploy: return "HwRedeploy";
    case RuleKind::Replace: return "Replace";
    case RuleKind::RecreateConnector: return "RecreateConnector";
  }
  return "?";
}

RuleKind parse_rule_kind(std::string_view name) {
  for (auto k : kAllRuleKinds) {
    if (rule_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown rule '" + std::string(name) +
                    "' (expected Restart, LwRedeploy, HwRedeploy, Replace or RecreateConnector)");
}

const Issue& IssueRegistry::create(IssueKind kind, const Match& match, std::string affected,
                                   double drop, int cycle) {
  const auto match_key = std::make_pair(match.pattern, match.key);
  if (by_match_.count(match_key)) {
    throw ConsistencyError("issue already open for " + std::string(pattern_name(match.pattern)) +
                           " '" + match.key + "'");
  }
  Issue issue;
  issue.sequence = next_sequence_++;
  issue.id = "I" + std::to_string(issue.sequence);
  issue.kind = kind;
  issue.match = match;
  issue.affected_element = std::move(affected);
  issue.utility_drop = drop;
  issue.detected_at_cycle = cycle;
  by_id_[issue.id] = issue.sequence;
  by_match_[match_key] = issue.sequence;
  return by_sequence_.emplace(issue.sequence, std::move(issue)).first->second;
}

std::optional<Issue> IssueRegistry::close(const std::string& issue_id) {
  auto it = by_id_.find(issue_id);
  if (it == by_id_.end()) return std::nullopt;
  auto node = by_sequence_.extract(it->second);
  by_id_.erase(it);
  by_match_.erase({node.mapped().match.pattern, node.mapped().match.key});
  return std::move(node.mapped());
}

std::optional<Issue> IssueRegistry::close_match(const Match& match) {
  auto it = by_match_.find({match.pattern, match.key});
  if (it == by_match_.end()) return std::nullopt;
  return close(by_sequence_.at(it->second).id);
}

const Issue* IssueRegistry::find(const std::string& issue_id) const {
  auto it = by_id_.find(issue_id);
  return it == by_id_.end() ? nullptr : &by_sequence_.at(it->second);
}

const Issue* IssueRegistry::find_match(const Match& match) const {
  auto it = by_match_.find({match.pattern, match.key});
  return it == by_match_.end() ? nullptr : &by_sequence_.at(it->second);
}

std::vector<Issue> IssueRegistry::open() const {
  std::vector<Issue> out;
  out.reserve(by_sequence_.size());
  for (const auto& [seq, issue] : by_sequence_) out.push_back(issue);
  return out;
}

void Annotations::drop_planned(const std::string& issue_id) {
  planned.erase(std::remove_if(planned.begin(), planned.end(),
                               [&](const PlannedRule& p) { return p.issue_id == issue_id; }),
                planned.end());
}

AnalysisResult analyze(const ArchitectureModel& model, const std::vector<Match>& new_matches,
                       const std::vector<Match>& invalidated, IssueRegistry& issues, int cycle) {
  AnalysisResult result;
  std::set<std::pair<PatternId, std::string>> fresh;
  for (const auto& m : new_matches) fresh.insert({m.pattern, m.key});

  for (const auto& m : invalidated) {
    if (polarity(m.pattern) != Polarity::Negative || fresh.count({m.pattern, m.key})) continue;
    if (auto closed = issues.close_match(m)) result.closed.push_back(std::move(*closed));
  }
  for (const auto& m : new_matches) {
    const auto kind = issue_kind_for(m.pattern);
    if (!kind || issues.find_match(m)) continue;
    const std::string affected =
        *kind == IssueKind::CF4 ? m.bound("connector") : m.bound("component");
    result.created.push_back(issues.create(*kind, m, affected, sub_utility(model, m), cycle));
  }
  return result;
}

std::string issue_log_line(const Issue& issue, bool opened, int cycle) {
  std::ostringstream out;
  out << cycle << ',' << (opened ? "open" : "close") << ',' << issue.id << ','
      << issue_kind_name(issue.kind) << ',' << issue.affected_element << ',' << issue.utility_drop;
  return out.str();
}

}  // namespace healing
