#pragma once

#include <string>
#include <vector>

#include "healing/issue.hpp"
#include "healing/match.hpp"
#include "healing/model.hpp"

namespace healing {

struct AnalysisResult {
  std::vector<Issue> created;
  std::vector<Issue> closed;
};

/// Analyze phase. Creates one issue per new negative match that has no open
/// issue and closes the issues of invalidated matches. A match listed as both
/// invalidated and new (a refreshed match) keeps its issue.
AnalysisResult analyze(const ArchitectureModel& model, const std::vector<Match>& new_matches,
                       const std::vector<Match>& invalidated, IssueRegistry& issues, int cycle);

/// "<cycle>,<open|close>,<issue id>,<kind>,<element>,<drop>"
std::string issue_log_line(const Issue& issue, bool opened, int cycle);

}  // namespace healing
