#pragma once

// Randomized SimLog generator for metric cross-checks. Produces structurally
// valid logs (non-decreasing time, one nv record per tick, generations before
// receptions) while deliberately hitting the awkward cases: same-tick
// receptions at two stations, duplicate receipts at one station, same-tick
// role rewrites, and receptions whose packet id never appears in a
// generation record.

#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"
#include "simlog.hpp"
#include "types.hpp"

namespace testutil {

using namespace minuet;

struct RandomLogConfig {
  Tick min_ticks = 40;
  Tick max_ticks = 160;
  int max_events = 3;
  int max_vehicles = 12;
  int max_stations = 3;
};

inline SimLog random_log(std::uint64_t seed, const RandomLogConfig& cfg = {}) {
  Rng rng(seed);
  // modulo bias is irrelevant for test data
  const auto pick = [&](std::uint64_t n) -> std::uint64_t {
    return n == 0 ? 0 : rng.next_u64() % n;
  };
  const auto chance = [&](double p) { return rng.next_unit() < p; };

  SimLog log;
  log.scenario = "random";
  log.strategy = "dca_like";
  log.seed = seed;
  log.tick_s = 0.1;
  const Tick ticks = cfg.min_ticks + static_cast<Tick>(pick(cfg.max_ticks - cfg.min_ticks + 1));
  log.duration_s = static_cast<double>(ticks) * log.tick_s;
  log.hop_latency_s = 0.1;

  const int n_events = 1 + static_cast<int>(pick(cfg.max_events));
  for (int i = 0; i < n_events; ++i) {
    EventMeta em;
    em.id = "ev" + std::to_string(i + 1);
    em.kind = chance(0.5) ? EventKind::fixed : EventKind::mobile;
    const Tick a = static_cast<Tick>(pick(ticks));
    const Tick b = a + static_cast<Tick>(pick(ticks - a));
    em.t_start_s = static_cast<double>(a) * log.tick_s;
    em.t_end_s = static_cast<double>(b) * log.tick_s;
    log.events.push_back(em);
  }

  std::vector<std::string> vehicles;
  const int n_veh = 2 + static_cast<int>(pick(cfg.max_vehicles - 1));
  for (int i = 0; i < n_veh; ++i) vehicles.push_back("v" + std::to_string(i + 1));
  std::vector<std::string> stations;
  const int n_st = 1 + static_cast<int>(pick(cfg.max_stations));
  for (int i = 0; i < n_st; ++i) stations.push_back("s" + std::to_string(i + 1));

  const auto any_vehicle = [&]() -> const std::string& { return vehicles[pick(vehicles.size())]; };
  const auto any_event = [&]() -> const std::string& {
    return log.events[pick(log.events.size())].id;
  };

  // packets generated so far and still eligible for receptions
  struct Live {
    PacketId pid;
    Tick created;
  };
  std::vector<Live> live;
  PacketId next_pid = 1;
  std::uint64_t next_gid = 1;

  const auto emit_packet = [&](Tick t, PacketKind kind) {
    Packet p;
    p.id = next_pid++;
    p.kind = kind;
    p.event = any_event();
    p.origin = any_vehicle();
    p.created_at = t;
    p.payload_bytes = 64;
    if (kind == PacketKind::announcement) p.t_max_s = 1.5;
    log.generated(t, p);
    if (kind == PacketKind::monitoring) live.push_back({p.id, t});
  };

  for (Tick t = 0; t < ticks; ++t) {
    log.nv(t, static_cast<std::uint32_t>(pick(n_veh + 1)));

    const int detects = static_cast<int>(pick(4));
    for (int i = 0; i < detects; ++i) log.detect(t, any_vehicle(), any_event());

    if (chance(0.4)) emit_packet(t, PacketKind::announcement);
    if (chance(0.5)) emit_packet(t, PacketKind::clustering);
    if (chance(0.5)) emit_packet(t, PacketKind::monitoring);
    if (chance(0.2)) emit_packet(t, PacketKind::monitoring);

    if (chance(0.1)) log.forwarded(t, next_pid - 1, any_vehicle(), any_vehicle(), 1);
    if (chance(0.05)) log.dropped(t, next_pid - 1, DropCause::loss);

    // receptions of earlier monitoring packets
    if (!live.empty()) {
      const int recvs = static_cast<int>(pick(3));
      for (int i = 0; i < recvs; ++i) {
        const Live& pk = live[pick(live.size())];
        const std::string& st = stations[pick(stations.size())];
        log.received(t, pk.pid, st, 1 + static_cast<std::uint32_t>(t - pk.created));
        // sometimes a same-tick duplicate: second station, or the same one
        if (chance(0.3)) {
          const std::string& st2 = stations[pick(stations.size())];
          log.received(t, pk.pid, st2, 1 + static_cast<std::uint32_t>(t - pk.created));
        }
      }
      // reception that joins to nothing: unknown packet id
      if (chance(0.05)) log.received(t, 900000 + pick(100), stations[0], 1);
    }

    if (chance(0.1)) log.group_formed(t, next_gid++, any_event(), any_vehicle());
    // occasional repeat record for an existing group id
    if (next_gid > 1 && chance(0.03)) {
      log.group_formed(t, 1 + pick(next_gid - 1), any_event(), any_vehicle());
    }

    const int roles = static_cast<int>(pick(3));
    for (int i = 0; i < roles; ++i) {
      RoleSet rs;
      if (chance(0.5)) rs.add(Role::monitor);
      if (chance(0.4)) rs.add(Role::relay);
      if (chance(0.4)) rs.add(Role::gateway);
      const std::string& v = any_vehicle();
      const std::string& ev = any_event();
      log.role_change(t, v, ev, rs);
      // same-tick rewrite: the later record must win
      if (chance(0.15)) log.role_change(t, v, ev, RoleSet{});
    }
  }

  return log;
}

}  // namespace testutil
