#include "engine.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace minuet {

namespace {

Tick round_ticks(double seconds, double tick_s) {
  return static_cast<Tick>(std::llround(seconds / tick_s));
}

std::unique_ptr<ClusteringStrategy> make_strategy(StrategyKind kind) {
  if (kind == StrategyKind::dca_like) return std::make_unique<DcaLikeStrategy>();
  return std::make_unique<PcttLikeStrategy>();
}

}  // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      clock_{scenario_.tick_s},
      tick_count_(round_ticks(scenario_.duration_s, scenario_.tick_s)),
      latency_ticks_(std::max<Tick>(1, round_ticks(scenario_.radio.hop_latency_s, scenario_.tick_s))),
      t_max_ticks_(round_ticks(scenario_.protocol.t_max_s, scenario_.tick_s)),
      announce_ticks_(std::max<Tick>(1, round_ticks(scenario_.protocol.announce_interval_s,
                                                    scenario_.tick_s))),
      monitor_period_ticks_(std::max<Tick>(
          1, round_ticks(1.0 / scenario_.protocol.monitor_rate_pps, scenario_.tick_s))),
      maintenance_ticks_(std::max<Tick>(
          1, round_ticks(scenario_.clustering.maintenance_interval_s, scenario_.tick_s))),
      grace_ticks_(scenario_.clustering.grace_intervals * maintenance_ticks_),
      strategy_(make_strategy(scenario_.clustering.strategy)),
      cluster_(*strategy_),
      link_(scenario_.radio, scenario_.tick_s, derive_seed(scenario_.seed, "radio")) {
  log_.scenario = scenario_.name;
  log_.strategy = strategy_name(scenario_.clustering.strategy);
  log_.seed = scenario_.seed;
  log_.tick_s = scenario_.tick_s;
  log_.duration_s = scenario_.duration_s;
  log_.hop_latency_s = clock_.seconds(latency_ticks_);
  for (const EventSpec& e : scenario_.events) {
    log_.events.push_back({e.id, e.kind, e.t_start_s, e.t_end_s});
  }
}

const VehicleState* Simulation::vehicle(const VehicleId& v) const {
  auto it = vehicles_.find(v);
  return it == vehicles_.end() ? nullptr : &it->second;
}

const std::vector<const BaseStation*>& Simulation::stations_of(const VehicleId& v) const {
  static const std::vector<const BaseStation*> none;
  auto it = stations_by_veh_.find(v);
  return it == stations_by_veh_.end() ? none : it->second;
}

bool Simulation::in_announcement_zone(const VehicleId& v, const EventId& ev) const {
  auto it = az_until_.find({v, ev});
  return it != az_until_.end() && it->second >= now_;
}

std::vector<VehicleId> Simulation::az_vehicles(const EventId& ev) const {
  std::vector<VehicleId> out;
  for (const auto& [key, until] : az_until_) {
    if (key.second != ev || until < now_) continue;
    if (vehicles_.count(key.first)) out.push_back(key.first);
  }
  std::sort(out.begin(), out.end(), id_less);
  return out;
}

bool Simulation::event_active(const EventId& ev) const {
  return event_pos_.count(ev) != 0;
}

void Simulation::log_group_formed(GroupId gid, const EventId& ev, const VehicleId& leader) {
  log_.group_formed(now_, gid, ev, leader);
}

void Simulation::emit_clustering(const VehicleId& origin, const EventId& ev,
                                 const std::vector<VehicleId>& targets) {
  Packet pkt = make_packet(PacketKind::clustering, ev, origin);
  log_.generated(now_, pkt);
  seen_before(origin, pkt.id);
  for (const VehicleId& to : targets) {
    if (to == origin) continue;
    transmit_to_vehicle(pkt, origin, to);
  }
}

Packet Simulation::make_packet(PacketKind kind, const EventId& ev, const VehicleId& origin) {
  Packet p;
  p.id = next_packet_id_++;
  p.kind = kind;
  p.event = ev;
  p.origin = origin;
  p.created_at = now_;
  p.hop_count = 0;
  p.payload_bytes = scenario_.protocol.payload_bytes;
  if (kind == PacketKind::announcement) p.t_max_s = scenario_.protocol.t_max_s;
  return p;
}

bool Simulation::seen_before(const VehicleId& v, PacketId pid) {
  auto [it, inserted] = veh_index_.try_emplace(v, static_cast<std::uint32_t>(veh_index_.size()));
  assert(veh_index_.size() < (1u << 16));
  const std::uint64_t key = (pid << 16) | it->second;
  return !seen_.insert(key).second;
}

bool Simulation::is_routing_member(const EventId& ev, const VehicleId& v) const {
  return groups_.is_active_member(ev, v);
}

const std::vector<std::pair<VehicleId, Position>>& Simulation::gateway_set(const EventId& ev) {
  if (gateway_cache_tick_ != now_ || gateway_cache_version_ != groups_.version()) {
    gateway_cache_.clear();
    gateway_cache_tick_ = now_;
    gateway_cache_version_ = groups_.version();
  }
  auto it = gateway_cache_.find(ev);
  if (it != gateway_cache_.end()) return it->second;

  std::vector<std::pair<VehicleId, Position>>& gws = gateway_cache_[ev];
  for (GroupId gid : groups_.groups_of(ev)) {
    const Group* g = groups_.find(gid);
    for (const auto& [v, ms] : g->members) {
      const VehicleState* vs = vehicle(v);
      if (vs && !stations_of(v).empty()) gws.push_back({v, vs->pos});
    }
  }
  std::sort(gws.begin(), gws.end(),
            [](const auto& a, const auto& b) { return id_less(a.first, b.first); });
  // a vehicle can be a member of at most one group per event, so no dupes
  return gws;
}

// ---------------------------------------------------------------------------
// radio actions
// ---------------------------------------------------------------------------

void Simulation::transmit_to_vehicle(const Packet& pkt, const VehicleId& from,
                                     const VehicleId& to) {
  Packet copy = pkt;
  copy.hop_count += 1;
  log_.forwarded(now_, copy.id, from, to, copy.hop_count);
  if (!link_.try_send()) {
    log_.dropped(now_, copy.id, DropCause::loss);
    return;
  }
  PendingDelivery d;
  d.pkt = std::move(copy);
  d.from = from;
  d.to_vehicle = to;
  in_flight_[now_ + latency_ticks_].push_back(std::move(d));
}

void Simulation::transmit_to_station(const Packet& pkt, const VehicleId& from,
                                     const BaseStation& st) {
  Packet copy = pkt;
  copy.hop_count += 1;
  log_.forwarded(now_, copy.id, from, st.id, copy.hop_count);
  if (!link_.try_send()) {
    log_.dropped(now_, copy.id, DropCause::loss);
    return;
  }
  PendingDelivery d;
  d.pkt = std::move(copy);
  d.from = from;
  d.to_station = true;
  d.station = st.id;
  in_flight_[now_ + latency_ticks_].push_back(std::move(d));
}

// ---------------------------------------------------------------------------
// tick phases
// ---------------------------------------------------------------------------

void Simulation::step() {
  assert(!finished());
  advance_world();
  detect_phase();
  announce_phase();
  deliver_phase();
  maintenance_phase();
  roles_phase();
  monitor_phase();
  ++now_;
}

void Simulation::run() {
  while (!finished()) step();
}

void Simulation::advance_world() {
  const double t_s = clock_.seconds(now_);

  std::vector<VehicleState> current = active_vehicles(scenario_, t_s);
  std::map<VehicleId, VehicleState, IdLess> next;
  for (VehicleState& v : current) next.emplace(v.id, v);

  // departures first: drop them from groups before anything else this tick
  for (const auto& [id, state] : vehicles_) {
    if (!next.count(id)) handle_vehicle_exit(id);
  }
  vehicles_ = std::move(next);
  vehicles_vec_ = std::move(current);

  adjacency_ = build_adjacency(vehicles_vec_, scenario_.radio.v2v_range_m);
  stations_by_veh_.clear();
  for (const VehicleState& v : vehicles_vec_) {
    stations_by_veh_[v.id] = stations_in_range(v.pos, scenario_.stations);
  }

  // event activity windows are tick-exact; clamp the position query so the
  // boundary ticks don't fall out of the [t_start, t_end] double comparison
  event_pos_.clear();
  for (const EventSpec& e : scenario_.events) {
    const Tick start = round_ticks(e.t_start_s, scenario_.tick_s);
    const Tick end = round_ticks(e.t_end_s, scenario_.tick_s);
    if (now_ >= start && now_ <= end) {
      const double te = std::clamp(t_s, e.t_start_s, e.t_end_s);
      if (auto pos = event_position_at(e, te)) event_pos_[e.id] = *pos;
    } else if (now_ > end && !events_ended_.count(e.id)) {
      events_ended_.insert(e.id);
      cluster_.on_event_end(*this, e.id);
    }
  }

  relayed_this_tick_.clear();
  log_.nv(now_, static_cast<std::uint32_t>(vehicles_vec_.size()));
}

void Simulation::handle_vehicle_exit(const VehicleId& v) {
  cluster_.on_vehicle_exit(*this, v);
}

void Simulation::detect_phase() {
  detecting_now_.clear();
  for (const EventSpec& e : scenario_.events) {
    auto pos_it = event_pos_.find(e.id);
    if (pos_it == event_pos_.end()) continue;
    for (const VehicleState& v : vehicles_vec_) {
      if (distance(v.pos, pos_it->second) > scenario_.radio.detection_range_m) continue;
      log_.detect(now_, v.id, e.id);
      detecting_now_.insert({v.id, e.id});
      detection_history_.insert({v.id, e.id});
      // first detection may promote a passive pctt member
      cluster_.on_detection(*this, v.id, e.id);
      // detectors are trivially inside the announcement zone
      auto& until = az_until_[{v.id, e.id}];
      until = std::max(until, now_ + t_max_ticks_);
    }
  }
}

void Simulation::announce_phase() {
  for (const auto& [v, ev] : detecting_now_) {
    auto [it, fresh] = next_announce_at_.try_emplace({v, ev}, now_);
    if (now_ < it->second) continue;
    it->second = now_ + announce_ticks_;

    Packet ann = make_packet(PacketKind::announcement, ev, v);
    log_.generated(now_, ann);
    seen_before(v, ann.id);
    cluster_.on_announcement(*this, v, ev);
    auto adj_it = adjacency_.find(v);
    if (adj_it != adjacency_.end()) {
      for (const VehicleId& nbr : adj_it->second) transmit_to_vehicle(ann, v, nbr);
    }
  }
}

void Simulation::deliver_phase() {
  auto it = in_flight_.find(now_);
  if (it == in_flight_.end()) return;
  // entries arrive in enqueue order; keep it that way
  std::vector<PendingDelivery> batch = std::move(it->second);
  in_flight_.erase(it);

  for (PendingDelivery& d : batch) {
    if (d.to_station) {
      log_.received(now_, d.pkt.id, d.station, d.pkt.hop_count);
      continue;
    }
    if (!vehicles_.count(d.to_vehicle)) {
      log_.dropped(now_, d.pkt.id, DropCause::receiver_gone);
      continue;
    }
    switch (d.pkt.kind) {
      case PacketKind::announcement:
        handle_announcement(d.to_vehicle, d.pkt, d.from);
        break;
      case PacketKind::monitoring:
        if (!seen_before(d.to_vehicle, d.pkt.id)) route_monitoring(d.to_vehicle, d.pkt);
        break;
      case PacketKind::clustering:
        // keep-alives and join/leave notices terminate at the receiver
        break;
    }
  }
}

void Simulation::handle_announcement(const VehicleId& v, const Packet& ann,
                                     const VehicleId& from) {
  if (seen_before(v, ann.id)) return;
  // announcement-zone rule: too old means the zone boundary passed this hop
  if (now_ - ann.created_at > t_max_ticks_) {
    log_.dropped(now_, ann.id, DropCause::az_expired);
    return;
  }
  auto& until = az_until_[{v, ann.event}];
  until = std::max(until, ann.created_at + t_max_ticks_);

  auto adj_it = adjacency_.find(v);
  if (adj_it != adjacency_.end()) {
    for (const VehicleId& nbr : adj_it->second) {
      if (nbr == from) continue;
      transmit_to_vehicle(ann, v, nbr);
    }
  }
  cluster_.on_announcement(*this, v, ann.event);
}

void Simulation::maintenance_phase() {
  if (now_ % maintenance_ticks_ != 0) return;
  cluster_.maintenance(*this);
}

void Simulation::roles_phase() {
  std::map<VehEvent, RoleSet> fresh;
  for (const VehicleState& v : vehicles_vec_) {
    for (const auto& [ev, pos] : event_pos_) {
      RoleSet roles;
      if (detecting_now_.count({v.id, ev})) roles.add(Role::monitor);
      if (groups_.is_active_member(ev, v.id)) {
        if (!stations_of(v.id).empty()) roles.add(Role::gateway);
        if (relayed_this_tick_.count({v.id, ev})) roles.add(Role::relay);
      }
      if (!roles.empty()) fresh[{v.id, ev}] = roles;
    }
  }

  // emit deltas: changed or newly cooperating...
  for (const auto& [key, roles] : fresh) {
    auto old = roles_.find(key);
    if (old == roles_.end() || old->second != roles) {
      log_.role_change(now_, key.first, key.second, roles);
    }
  }
  // ...and everyone who stopped cooperating
  for (const auto& [key, roles] : roles_) {
    if (!fresh.count(key)) log_.role_change(now_, key.first, key.second, RoleSet{});
  }
  roles_ = std::move(fresh);
}

void Simulation::monitor_phase() {
  for (const auto& [v, ev] : detecting_now_) {
    auto [it, fresh] = next_monitor_at_.try_emplace({v, ev}, now_);
    if (now_ < it->second) continue;
    it->second = now_ + monitor_period_ticks_;

    Packet pkt = make_packet(PacketKind::monitoring, ev, v);
    log_.generated(now_, pkt);
    seen_before(v, pkt.id);
    route_monitoring(v, pkt);
  }
}

void Simulation::route_monitoring(const VehicleId& v, const Packet& pkt) {
  // monitoring traffic travels the cooperating membership of its event;
  // a vehicle outside that set lets the copy die
  if (!is_routing_member(pkt.event, v)) return;

  const std::vector<const BaseStation*>& sts = stations_of(v);
  if (!sts.empty()) {
    // gateway hop: deliver to every station in radio range, end of the road
    for (const BaseStation* st : sts) transmit_to_station(pkt, v, *st);
    return;
  }

  const auto& gateways = gateway_set(pkt.event);
  if (gateways.empty()) return;  // nowhere to aim at; copy dies here

  const VehicleState* vs = vehicle(v);
  if (!vs) return;
  const Position* target = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [gv, gpos] : gateways) {
    const double d = distance(vs->pos, gpos);
    if (d < best) {  // id-ascending order already breaks ties
      best = d;
      target = &gpos;
    }
  }

  auto adj_it = adjacency_.find(v);
  if (adj_it == adjacency_.end()) return;
  bool forwarded = false;
  for (const VehicleId& nbr : adj_it->second) {
    if (!is_routing_member(pkt.event, nbr)) continue;
    const VehicleState* ns = vehicle(nbr);
    if (!ns) continue;
    if (distance(ns->pos, *target) < best) {
      transmit_to_vehicle(pkt, v, nbr);
      forwarded = true;
    }
  }
  if (forwarded && v != pkt.origin) relayed_this_tick_.insert({v, pkt.event});
}

}  // namespace minuet
