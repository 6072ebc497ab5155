#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simlog.hpp"
#include "types.hpp"

namespace minuet {

// ---------------------------------------------------------------------------
// Evaluation metrics. Everything here reads a SimLog and nothing else; the
// engine's in-memory state never leaks into the numbers.
// ---------------------------------------------------------------------------

// inclusive tick window
struct Interval {
  Tick begin = 0;
  Tick end = 0;
  bool contains(Tick t) const { return t >= begin && t <= end; }
};

Interval full_interval(const SimLog& log);

// per-event, per-tick series; arrays run over ticks 0..tick_count-1
struct MetricSeries {
  EventId event;
  std::vector<std::uint32_t> n_vd;  // vehicles detecting
  std::vector<std::uint32_t> n_vc;  // vehicles holding a cooperating role
  std::vector<std::uint32_t> cp_g;  // clustering packets generated
  std::vector<std::uint32_t> mp_g;  // monitoring packets generated
  std::vector<std::uint32_t> mp_r;  // monitoring receptions at stations
};

std::vector<MetricSeries> compute_series(const SimLog& log);

struct RedundancyStats {
  std::uint64_t total = 0;      // station receptions in the window
  std::uint64_t single = 0;     // first receipt per packet (tie: lowest station id)
  std::uint64_t redundant = 0;  // everything after the first
  // defined when total > 0
  double single_ratio = 0.0;
  double redundant_ratio = 0.0;
};

// All per-event filters join receptions to events through the packet's
// generation record.
RedundancyStats redundancy(const SimLog& log, Interval dt,
                           const std::optional<EventId>& event = std::nullopt);

// Mean (receive - created) in seconds over station receptions in the window;
// per_unique averages only each packet's first receipt. Absent when nothing
// was received.
std::optional<double> average_delay(const SimLog& log, Interval dt, bool per_unique = false,
                                    const std::optional<EventId>& event = std::nullopt);

// clustering / (announcement + clustering + monitoring) generation volume.
// Absent when nothing was generated in the window.
std::optional<double> clustering_overhead(const SimLog& log, Interval dt,
                                          const std::optional<EventId>& event = std::nullopt);

// Time-integrated share of vehicles emitting clustering packets. The default
// denominator integrates |N(t)|; literal_denominator integrates the
// triangular sum |N(t)|(|N(t)|+1)/2 instead. Absent when the world was empty
// for the whole window.
std::optional<double> grouped_vehicle_ratio(const SimLog& log, Interval dt,
                                            bool literal_denominator = false,
                                            const std::optional<EventId>& event = std::nullopt);

// Distinct group ids whose first formation record falls inside the window.
std::uint64_t formed_groups(const SimLog& log, Interval dt,
                            const std::optional<EventId>& event = std::nullopt);

struct SummaryOptions {
  bool literal_group_denominator = false;
  bool per_unique_delay = false;
};

struct MetricSummary {
  EventId event;
  EventKind kind = EventKind::fixed;
  double t_start_s = 0.0;
  double t_end_s = 0.0;

  std::uint64_t ap_g = 0;  // announcements generated
  std::uint64_t cp_g = 0;
  std::uint64_t mp_g = 0;
  RedundancyStats redundancy;
  std::optional<double> d_avg_s;
  std::optional<double> c_ratio;
  std::optional<double> g_ratio;
  std::uint64_t f_groups = 0;

  // fraction of the event's lifetime ticks with >=1 detection / >=1 delivery
  double monitored_share = 0.0;
  double delivery_share = 0.0;
};

// One summary per event named in the log header, full-run window.
std::vector<MetricSummary> summarize(const SimLog& log, SummaryOptions opts = {});

}  // namespace minuet
