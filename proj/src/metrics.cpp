#include "metrics.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace minuet {

namespace {

// pid -> (event, created tick) from generation records; the join used by
// every reception-based metric
struct GenIndex {
  std::unordered_map<PacketId, std::pair<const std::string*, Tick>> by_pid;

  explicit GenIndex(const SimLog& log) {
    by_pid.reserve(log.records.size() / 4 + 1);
    for (const Record& r : log.records) {
      if (r.kind == RecordKind::generated) by_pid.try_emplace(r.id, &r.ev, r.t);
    }
  }

  const std::pair<const std::string*, Tick>* find(PacketId pid) const {
    auto it = by_pid.find(pid);
    return it == by_pid.end() ? nullptr : &it->second;
  }
};

bool event_matches(const GenIndex& gens, PacketId pid, const std::optional<EventId>& event) {
  const auto* g = gens.find(pid);
  if (!g) return false;  // reception without generation: not attributable
  return !event || *g->first == *event;
}

// receptions in the window for the given event, as (pid, t, station)
struct Receipt {
  PacketId pid;
  Tick t;
  const std::string* station;
};

std::vector<Receipt> receipts_in(const SimLog& log, const GenIndex& gens, Interval dt,
                                 const std::optional<EventId>& event) {
  std::vector<Receipt> out;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::received || !dt.contains(r.t)) continue;
    if (!event_matches(gens, r.id, event)) continue;
    out.push_back({r.id, r.t, &r.peer});
  }
  return out;
}

// marks each receipt as first-of-its-packet (ties: lowest station id)
std::vector<bool> first_flags(std::vector<Receipt>& receipts) {
  std::vector<std::uint32_t> order(receipts.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const Receipt& ra = receipts[a];
    const Receipt& rb = receipts[b];
    if (ra.pid != rb.pid) return ra.pid < rb.pid;
    if (ra.t != rb.t) return ra.t < rb.t;
    if (*ra.station != *rb.station) return id_less(*ra.station, *rb.station);
    return a < b;
  });
  std::vector<bool> first(receipts.size(), false);
  PacketId prev = 0;
  bool have_prev = false;
  for (std::uint32_t idx : order) {
    if (!have_prev || receipts[idx].pid != prev) {
      first[idx] = true;
      prev = receipts[idx].pid;
      have_prev = true;
    }
  }
  return first;
}

}  // namespace

Interval full_interval(const SimLog& log) {
  const Tick n = log.tick_count();
  return {0, n > 0 ? n - 1 : 0};
}

std::vector<MetricSeries> compute_series(const SimLog& log) {
  const Tick n = log.tick_count();
  const GenIndex gens(log);

  std::vector<MetricSeries> out;
  std::map<EventId, std::size_t> index;
  for (const EventMeta& e : log.events) {
    index[e.id] = out.size();
    MetricSeries s;
    s.event = e.id;
    s.n_vd.assign(n, 0);
    s.n_vc.assign(n, 0);
    s.cp_g.assign(n, 0);
    s.mp_g.assign(n, 0);
    s.mp_r.assign(n, 0);
    out.push_back(std::move(s));
  }
  if (out.empty() || n == 0) return out;

  const auto series_of = [&](const EventId& ev) -> MetricSeries* {
    auto it = index.find(ev);
    return it == index.end() ? nullptr : &out[it->second];
  };

  // detections: distinct vehicles per tick
  std::map<EventId, std::map<Tick, IdSet>> detects;
  // n_vc via role replay: per event, per vehicle -> change list
  std::map<EventId, std::map<VehicleId, std::vector<std::pair<Tick, bool>>, IdLess>> role_edges;

  for (const Record& r : log.records) {
    if (r.t >= n) continue;
    switch (r.kind) {
      case RecordKind::detect:
        if (MetricSeries* s = series_of(r.ev)) {
          auto& at = detects[r.ev][r.t];
          if (at.insert(r.veh).second) ++s->n_vd[r.t];
        }
        break;
      case RecordKind::generated:
        if (MetricSeries* s = series_of(r.ev)) {
          if (r.pkind == PacketKind::clustering) ++s->cp_g[r.t];
          if (r.pkind == PacketKind::monitoring) ++s->mp_g[r.t];
        }
        break;
      case RecordKind::received: {
        const auto* g = gens.find(r.id);
        if (!g) break;
        if (MetricSeries* s = series_of(*g->first)) ++s->mp_r[r.t];
        break;
      }
      case RecordKind::role_change: {
        auto roles = parse_roles(r.peer);
        if (!roles) break;
        role_edges[r.ev][r.veh].push_back({r.t, !roles->empty()});
        break;
      }
      default:
        break;
    }
  }

  // integrate role intervals: +1 from a non-empty change until the next change
  for (auto& [ev, per_vehicle] : role_edges) {
    MetricSeries* s = series_of(ev);
    if (!s) continue;
    for (auto& [veh, edges] : per_vehicle) {
      // records arrive in time order; same-tick rewrites keep the last word
      std::vector<std::pair<Tick, bool>> clean;
      for (const auto& e : edges) {
        if (!clean.empty() && clean.back().first == e.first) {
          clean.back().second = e.second;
        } else {
          clean.push_back(e);
        }
      }
      for (std::size_t i = 0; i < clean.size(); ++i) {
        if (!clean[i].second) continue;
        const Tick from = clean[i].first;
        const Tick to = i + 1 < clean.size() ? clean[i + 1].first : n;
        for (Tick t = std::max<Tick>(from, 0); t < std::min(to, n); ++t) ++s->n_vc[t];
      }
    }
  }

  return out;
}

RedundancyStats redundancy(const SimLog& log, Interval dt, const std::optional<EventId>& event) {
  const GenIndex gens(log);
  std::vector<Receipt> receipts = receipts_in(log, gens, dt, event);
  const std::vector<bool> first = first_flags(receipts);

  RedundancyStats st;
  st.total = receipts.size();
  for (bool f : first) st.single += f ? 1 : 0;
  st.redundant = st.total - st.single;
  if (st.total > 0) {
    st.single_ratio = static_cast<double>(st.single) / static_cast<double>(st.total);
    // complement, not a second division: the two shares must sum to exactly 1
    st.redundant_ratio = 1.0 - st.single_ratio;
  }
  return st;
}

std::optional<double> average_delay(const SimLog& log, Interval dt, bool per_unique,
                                    const std::optional<EventId>& event) {
  const GenIndex gens(log);
  std::vector<Receipt> receipts = receipts_in(log, gens, dt, event);
  std::vector<bool> first;
  if (per_unique) first = first_flags(receipts);

  double sum_ticks = 0.0;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < receipts.size(); ++i) {
    if (per_unique && !first[i]) continue;
    const auto* g = gens.find(receipts[i].pid);
    sum_ticks += static_cast<double>(receipts[i].t - g->second);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum_ticks / static_cast<double>(count) * log.tick_s;
}

std::optional<double> clustering_overhead(const SimLog& log, Interval dt,
                                          const std::optional<EventId>& event) {
  std::uint64_t cp = 0;
  std::uint64_t all = 0;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::generated || !dt.contains(r.t)) continue;
    if (event && r.ev != *event) continue;
    ++all;
    if (r.pkind == PacketKind::clustering) ++cp;
  }
  if (all == 0) return std::nullopt;
  return static_cast<double>(cp) / static_cast<double>(all);
}

std::optional<double> grouped_vehicle_ratio(const SimLog& log, Interval dt,
                                            bool literal_denominator,
                                            const std::optional<EventId>& event) {
  // numerator: per tick, distinct vehicles that emitted >=1 clustering packet
  std::map<Tick, IdSet> emitters;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::generated || r.pkind != PacketKind::clustering) continue;
    if (!dt.contains(r.t)) continue;
    if (event && r.ev != *event) continue;
    emitters[r.t].insert(r.veh);
  }
  std::uint64_t numerator = 0;
  for (const auto& [t, ids] : emitters) numerator += ids.size();

  // denominator: world population integral (one nv record per tick)
  long double denominator = 0.0;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::active_count || !dt.contains(r.t)) continue;
    const long double nv = r.count;
    denominator += literal_denominator ? nv * (nv + 1) / 2.0L : nv;
  }
  if (denominator <= 0.0) return std::nullopt;
  return static_cast<double>(static_cast<long double>(numerator) / denominator);
}

std::uint64_t formed_groups(const SimLog& log, Interval dt, const std::optional<EventId>& event) {
  std::map<GroupId, Tick> first_seen;
  for (const Record& r : log.records) {
    if (r.kind != RecordKind::group_formed) continue;
    if (event && r.ev != *event) continue;
    auto [it, fresh] = first_seen.try_emplace(r.id, r.t);
    if (!fresh) it->second = std::min(it->second, r.t);
  }
  std::uint64_t count = 0;
  for (const auto& [gid, t] : first_seen) {
    if (dt.contains(t)) ++count;
  }
  return count;
}

std::vector<MetricSummary> summarize(const SimLog& log, SummaryOptions opts) {
  const Interval dt = full_interval(log);
  const Tick n = log.tick_count();
  const std::vector<MetricSeries> series = compute_series(log);
  const SimClock clock{log.tick_s};

  std::vector<MetricSummary> out;
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const EventMeta& em = log.events[i];
    const MetricSeries& s = series[i];

    MetricSummary m;
    m.event = em.id;
    m.kind = em.kind;
    m.t_start_s = em.t_start_s;
    m.t_end_s = em.t_end_s;

    for (const Record& r : log.records) {
      if (r.kind == RecordKind::generated && r.ev == em.id && dt.contains(r.t) &&
          r.pkind == PacketKind::announcement) {
        ++m.ap_g;
      }
    }
    for (Tick t = dt.begin; t <= dt.end && t < n; ++t) {
      m.cp_g += s.cp_g[t];
      m.mp_g += s.mp_g[t];
    }

    m.redundancy = redundancy(log, dt, em.id);
    m.d_avg_s = average_delay(log, dt, opts.per_unique_delay, em.id);
    m.c_ratio = clustering_overhead(log, dt, em.id);
    m.g_ratio = grouped_vehicle_ratio(log, dt, opts.literal_group_denominator, em.id);
    m.f_groups = formed_groups(log, dt, em.id);

    const Tick start = std::max<Tick>(0, clock.ticks(em.t_start_s));
    const Tick end = std::min<Tick>(n - 1, clock.ticks(em.t_end_s));
    std::uint64_t lifetime = 0;
    std::uint64_t monitored = 0;
    std::uint64_t delivering = 0;
    for (Tick t = start; t <= end; ++t) {
      ++lifetime;
      if (s.n_vd[t] > 0) ++monitored;
      if (s.mp_r[t] > 0) ++delivering;
    }
    if (lifetime > 0) {
      m.monitored_share = static_cast<double>(monitored) / static_cast<double>(lifetime);
      m.delivery_share = static_cast<double>(delivering) / static_cast<double>(lifetime);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace minuet
