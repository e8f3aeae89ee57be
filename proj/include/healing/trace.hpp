#pragma once

#include <string>
#include <vector>

namespace healing {

struct TracePoint {
  double time_ms = 0.0;
  double utility = 0.0;
  std::string event;  // tags joined by ';'
};

/// Piecewise-constant utility over time. A point holds from its time until
/// the next point's time.
class Trace {
 public:
  /// Times must not decrease; a point at the last point's time replaces its
  /// utility and appends the event tag.
  void record(double time_ms, double utility, const std::string& event = {});
  /// Extends the trace to `end_ms` with the last utility.
  void close(double end_ms);

  const std::vector<TracePoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }
  double start() const;
  double end() const;
  double utility_at(double time_ms) const;

  /// Exact integral over [t0, t1]. Throws ConfigError outside the span.
  double reward(double t0, double t1) const;

  /// "time_ms,utility,event" rows with a header.
  std::string to_csv() const;

 private:
  std::vector<TracePoint> points_;
  double end_ = 0.0;
};

double reward(const Trace& trace, double t0, double t1);

/// Shortest round-trip text of a double.
std::string format_number(double v);

}  // namespace healing
