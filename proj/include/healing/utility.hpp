#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "healing/match.hpp"
#include "healing/model.hpp"
#include "healing/patterns.hpp"
#include "healing/rules.hpp"

namespace healing {

/// criticality × type reliability × connectivity. For a tombstone the
/// connectivity recorded at removal is used.
double potential(const ArchitectureModel& model, const Component& c);

/// U_i(G, m). Throws EvaluationError on a dangling binding.
double sub_utility(const ArchitectureModel& model, const Match& match);

/// Cached sub-utility per match plus their running sum.
class UtilityLedger {
 public:
  double total() const { return sum_ + compensation_; }
  std::size_t size() const { return per_match_.size(); }
  bool contains(const Match& m) const { return per_match_.count({m.pattern, m.key}) > 0; }
  /// Throws ConsistencyError if absent.
  double value(const Match& m) const;

  void add(const Match& m, double value);
  /// Returns the removed value; throws ConsistencyError if absent.
  double remove(const Match& m);
  void clear();

  /// Sum of cached values recomputed from scratch.
  double recomputed_total() const;

  /// "pattern,key,value" rows in canonical order, with a header.
  std::string to_csv() const;

 private:
  void accumulate(double v);

  std::map<std::pair<PatternId, std::string>, double> per_match_;
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Total utility: sum of sub-utilities over a match set. Refills `ledger` when given.
double total_utility(const ArchitectureModel& model, const MatchSet& matches,
                     UtilityLedger* ledger = nullptr);

/// Incremental update: −Σ cached values of `removed` + Σ fresh values of `added`, with
/// the ledger updated. Removals are processed first.
double utility_delta(UtilityLedger& ledger, const std::vector<Match>& removed,
                     const std::vector<Match>& added, const ArchitectureModel& model);

/// Direct evaluation of the total utility from element states, without pattern matching.
double utility_from_scratch(const ArchitectureModel& model);

/// Utility change if `application` ran now, computed locally without
/// mutating the model. Throws StalenessError if the match no longer holds.
double rule_impact(const ArchitectureModel& model, const RuleApplication& application);

/// Derivative of the utility with respect to one extra connector on `c`,
/// excluding crashed connectors that go to `exclude`.
double connectivity_gradient(const ArchitectureModel& model, const Component& c,
                             const ComponentId& exclude);

inline bool utility_close(double a, double b, double rel = 1e-9) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  const double d = a - b;
  return (d < 0 ? -d : d) <= rel * scale;
}

}  // namespace healing
