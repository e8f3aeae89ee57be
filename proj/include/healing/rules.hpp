#pragma once

#include <cstdint>
#include <string>

#include "healing/issue.hpp"
#include "healing/match.hpp"

namespace healing {

/// One repair rule bound to one issue.
struct RuleApplication {
  RuleKind rule = RuleKind::Restart;
  std::string issue_id;
  IssueKind kind = IssueKind::CF1;
  Match match;
  std::string target;            // component id, or connector id for CF4
  std::string replacement_type;  // Replace only
  double utility_increase = 0.0;
  double cost_ms = 1.0;
  std::uint64_t issue_sequence = 0;

  double ratio() const { return utility_increase / cost_ms; }
};

}  // namespace healing
