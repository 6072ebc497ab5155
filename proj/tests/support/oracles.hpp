#pragma once

// Independent brute-force reimplementation of every metric operation.
// Deliberately structured differently from the production code (per-op full
// scans, no shared indices) so agreement between the two is meaningful.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "simlog.hpp"
#include "types.hpp"

namespace oracle {

using namespace minuet;

using EvFilter = std::optional<EventId>;

// event that a packet id was generated for, if any
inline std::optional<std::string> packet_event(const SimLog& log, PacketId pid) {
  for (const Record& r : log.records) {
    if (r.kind == RecordKind::generated && r.id == pid) return r.ev;
  }
  return std::nullopt;
}

inline std::optional<Tick> packet_created(const SimLog& log, PacketId pid) {
  for (const Record& r : log.records) {
    if (r.kind == RecordKind::generated && r.id == pid) return r.t;
  }
  return std::nullopt;
}

inline bool in_filter(const SimLog& log, PacketId pid, const EvFilter& ev) {
  const auto e = packet_event(log, pid);
  if (!e) return false;
  return !ev || *e == *ev;
}

// --- per-tick series ------------------------------------------------------

inline std::vector<std::uint32_t> series_detecting(const SimLog& log, const EventId& ev) {
  const Tick n = log.tick_count();
  std::vector<std::uint32_t> out(n, 0);
  for (Tick t = 0; t < n; ++t) {
    std::set<std::string> vs;
    for (const Record& r : log.records) {
      if (r.kind == RecordKind::detect && r.t == t && r.ev == ev) vs.insert(r.veh);
    }
    out[t] = static_cast<std::uint32_t>(vs.size());
  }
  return out;
}

inline std::vector<std::uint32_t> series_cooperating(const SimLog& log, const EventId& ev) {
  const Tick n = log.tick_count();
  std::vector<std::uint32_t> out(n, 0);
  // all vehicles that ever had a role record for this event
  std::set<std::string> vehicles;
  for (const Record& r : log.records) {
    if (r.kind == RecordKind::role_change && r.ev == ev) vehicles.insert(r.veh);
  }
  for (Tick t = 0; t < n; ++t) {
    for (const std::string& v : vehicles) {
      // last role record at or before t wins (ties by record order)
      std::optional<bool> cooperating;
      for (const Record& r : log.records) {
        if (r.kind != RecordKind::role_change || r.ev != ev || r.veh != v) continue;
        if (r.t > t) break;  // records are time-ordered
        const auto rs = parse_roles(r.peer);
        if (rs) cooperating = !rs->empty();
      }
      if (cooperating.value_or(false)) ++out[t];
    }
  }
  return out;
}

inline std::vector<std::uint32_t> series_generated(const SimLog& log, const EventId& ev,
                                                   PacketKind kind) {
  const Tick n = log.tick_count();
  std::vector<std::uint32_t> out(n, 0);
  for (const Record& r : log.records) {
    if (r.kind == RecordKind::generated && r.ev == ev && r.pkind == kind && r.t < n) ++out[r.t];
  }
  return out;
}

inline std::vector<std::uint32_t> series_received(const SimLog& log, const EventId& ev) {
  const Tick n = log.tick_count();
  std::vector<std::uint32_t> out(n, 0);
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::received || r.t >= n) continue;
    const auto e = packet_event(log, r.id);
    if (e && *e == ev) ++out[r.t];
  }
  return out;
}

// --- reception-based metrics ------------------------------------------------

struct RedundancyO {
  std::uint64_t total = 0;
  std::uint64_t single = 0;
  std::uint64_t redundant = 0;
};

inline RedundancyO redundancy(const SimLog& log, Interval dt, const EvFilter& ev = {}) {
  std::map<PacketId, std::uint64_t> per_packet;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::received || !dt.contains(r.t)) continue;
    if (!in_filter(log, r.id, ev)) continue;
    ++per_packet[r.id];
  }
  RedundancyO st;
  for (const auto& [pid, cnt] : per_packet) {
    st.total += cnt;
    st.single += 1;
    st.redundant += cnt - 1;
  }
  return st;
}

inline std::optional<double> average_delay(const SimLog& log, Interval dt, bool per_unique,
                                           const EvFilter& ev = {}) {
  double sum = 0.0;
  std::uint64_t count = 0;
  if (per_unique) {
    // earliest in-window receipt per packet; its delay is what counts
    std::map<PacketId, Tick> first_t;
    for (const Record& r : log.records) {
      if (r.kind != RecordKind::received || !dt.contains(r.t)) continue;
      if (!in_filter(log, r.id, ev)) continue;
      auto [it, fresh] = first_t.try_emplace(r.id, r.t);
      if (!fresh) it->second = std::min(it->second, r.t);
    }
    for (const auto& [pid, t] : first_t) {
      sum += static_cast<double>(t - *packet_created(log, pid));
      ++count;
    }
  } else {
    for (const Record& r : log.records) {
      if (r.kind != RecordKind::received || !dt.contains(r.t)) continue;
      if (!in_filter(log, r.id, ev)) continue;
      sum += static_cast<double>(r.t - *packet_created(log, r.id));
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count) * log.tick_s;
}

// --- generation-based metrics -----------------------------------------------

inline std::optional<double> clustering_overhead(const SimLog& log, Interval dt,
                                                 const EvFilter& ev = {}) {
  std::uint64_t cp = 0, total = 0;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::generated || !dt.contains(r.t)) continue;
    if (ev && r.ev != *ev) continue;
    ++total;
    if (r.pkind == PacketKind::clustering) ++cp;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(cp) / static_cast<double>(total);
}

inline std::optional<double> grouped_vehicle_ratio(const SimLog& log, Interval dt,
                                                   bool literal_denominator,
                                                   const EvFilter& ev = {}) {
  std::uint64_t numerator = 0;
  for (Tick t = dt.begin; t <= dt.end; ++t) {
    std::set<std::string> emitters;
    for (const Record& r : log.records) {
      if (r.kind != RecordKind::generated || r.t != t) continue;
      if (r.pkind != PacketKind::clustering) continue;
      if (ev && r.ev != *ev) continue;
      emitters.insert(r.veh);
    }
    numerator += emitters.size();
  }
  long double denominator = 0.0L;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::active_count || !dt.contains(r.t)) continue;
    const long double nv = r.count;
    denominator += literal_denominator ? nv * (nv + 1.0L) / 2.0L : nv;
  }
  if (denominator <= 0.0L) return std::nullopt;
  return static_cast<double>(numerator / denominator);
}

inline std::uint64_t formed_groups(const SimLog& log, Interval dt, const EvFilter& ev = {}) {
  std::set<std::uint64_t> counted;
  std::set<std::uint64_t> seen_anywhere;
  std::uint64_t count = 0;
  for (const Record& r : log.records) {  // time-ordered: first record = first formation
    if (r.kind != RecordKind::group_formed) continue;
    if (ev && r.ev != *ev) continue;
    if (!seen_anywhere.insert(r.id).second) continue;
    if (dt.contains(r.t) && counted.insert(r.id).second) ++count;
  }
  return count;
}

// --- lifetime shares ----------------------------------------------------------

// fraction of the event's lifetime ticks with at least one detection record
inline double monitored_share(const SimLog& log, const EventMeta& em) {
  const Tick n = log.tick_count();
  const Tick start = static_cast<Tick>(std::llround(em.t_start_s / log.tick_s));
  const Tick end = std::min<Tick>(n - 1, static_cast<Tick>(std::llround(em.t_end_s / log.tick_s)));
  std::uint64_t lifetime = 0, hit = 0;
  for (Tick t = std::max<Tick>(0, start); t <= end; ++t) {
    ++lifetime;
    for (const Record& r : log.records) {
      if (r.kind == RecordKind::detect && r.t == t && r.ev == em.id) {
        ++hit;
        break;
      }
    }
  }
  return lifetime == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(lifetime);
}

inline double delivery_share(const SimLog& log, const EventMeta& em) {
  const Tick n = log.tick_count();
  const Tick start = static_cast<Tick>(std::llround(em.t_start_s / log.tick_s));
  const Tick end = std::min<Tick>(n - 1, static_cast<Tick>(std::llround(em.t_end_s / log.tick_s)));
  std::uint64_t lifetime = 0, hit = 0;
  for (Tick t = std::max<Tick>(0, start); t <= end; ++t) {
    ++lifetime;
    for (const Record& r : log.records) {
      if (r.kind != RecordKind::received || r.t != t) continue;
      const auto e = packet_event(log, r.id);
      if (e && *e == em.id) {
        ++hit;
        break;
      }
    }
  }
  return lifetime == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(lifetime);
}

}  // namespace oracle
