#include "healing/trace.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "healing/error.hpp"

namespace healing {

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void Trace::record(double time_ms, double utility, const std::string& event) {
  if (!points_.empty()) {
    auto& last = points_.back();
    if (time_ms < last.time_ms) {
      throw ConfigError("trace time went backwards: " + format_number(time_ms) + " < " +
                        format_number(last.time_ms));
    }
    if (time_ms == last.time_ms) {
      last.utility = utility;
      if (!event.empty()) last.event += last.event.empty() ? event : ";" + event;
      return;
    }
  }
  points_.push_back({time_ms, utility, event});
  end_ = std::max(end_, time_ms);
}

void Trace::close(double end_ms) {
  if (points_.empty()) throw ConfigError("cannot close an empty trace");
  end_ = std::max(end_, end_ms);
}

double Trace::start() const { return points_.empty() ? 0.0 : points_.front().time_ms; }
double Trace::end() const { return end_; }

double Trace::utility_at(double time_ms) const {
  if (points_.empty() || time_ms < points_.front().time_ms) {
    throw ConfigError("time " + format_number(time_ms) + " precedes the trace");
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), time_ms,
                             [](double t, const TracePoint& p) { return t < p.time_ms; });
  return std::prev(it)->utility;
}

double Trace::reward(double t0, double t1) const {
  if (points_.empty() || t0 > t1 || t0 < start() || t1 > end()) {
    throw ConfigError("reward window [" + format_number(t0) + ", " + format_number(t1) +
                      "] outside trace span [" + format_number(start()) + ", " + format_number(end()) + "]");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double seg_start = std::max(points_[i].time_ms, t0);
    const double seg_end = std::min(i + 1 < points_.size() ? points_[i + 1].time_ms : end_, t1);
    if (seg_end > seg_start) total += points_[i].utility * (seg_end - seg_start);
  }
  return total;
}

std::string Trace::to_csv() const {
  std::ostringstream out;
  out << "time_ms,utility,event\n";
  for (const auto& p : points_) {
    out << format_number(p.time_ms) << ',' << format_number(p.utility) << ',' << p.event << '\n';
  }
  if (!points_.empty() && end_ > points_.back().time_ms) {
    out << format_number(end_) << ',' << format_number(points_.back().utility) << ",end\n";
  }
  return out.str();
}

double reward(const Trace& trace, double t0, double t1) { return trace.reward(t0, t1); }

}  // namespace healing
