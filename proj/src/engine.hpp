#pragma once

#include <map>
#include <memory>
#include <set>
#include <unordered_set>
#include <vector>

#include "clustering.hpp"
#include "mobility.hpp"
#include "radio.hpp"
#include "simlog.hpp"
#include "types.hpp"

namespace minuet {

// ---------------------------------------------------------------------------
// Cooperative-monitoring protocol engine. One instance runs one scenario to
// completion; every tick executes, in order: world update, detection,
// announcements, reception handling, cluster maintenance, role assignment,
// monitoring generation. All iteration is over ordered containers, so a given
// (scenario, seed) always produces the identical log.
// ---------------------------------------------------------------------------

class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  void step();  // one tick; precondition: !finished()
  void run();   // all remaining ticks
  bool finished() const { return now_ >= tick_count_; }

  Tick now() const { return now_; }
  const Scenario& scenario() const { return scenario_; }
  const SimLog& log() const { return log_; }
  SimLog take_log() { return std::move(log_); }

  // --- state queries (also used by the cluster engine) ---------------------
  const std::map<VehicleId, VehicleState, IdLess>& vehicles() const { return vehicles_; }
  const VehicleState* vehicle(const VehicleId& v) const;
  const Adjacency& adjacency() const { return adjacency_; }
  const std::vector<const BaseStation*>& stations_of(const VehicleId& v) const;
  GroupTable& groups() { return groups_; }
  const GroupTable& groups() const { return groups_; }
  bool has_detected(const VehicleId& v, const EventId& ev) const {
    return detection_history_.count({v, ev}) != 0;
  }
  bool in_announcement_zone(const VehicleId& v, const EventId& ev) const;
  // vehicles currently inside the event's announcement zone, ascending id
  std::vector<VehicleId> az_vehicles(const EventId& ev) const;
  bool event_active(const EventId& ev) const;

  Tick maintenance_ticks() const { return maintenance_ticks_; }
  Tick grace_ticks() const { return grace_ticks_; }
  double v2v_range() const { return scenario_.radio.v2v_range_m; }

  // --- actions the cluster engine performs ----------------------------------
  GroupId next_group_id() { return next_group_id_++; }
  void log_group_formed(GroupId gid, const EventId& ev, const VehicleId& leader);
  // one clustering packet from `origin`, transmitted to each target in range
  void emit_clustering(const VehicleId& origin, const EventId& ev,
                       const std::vector<VehicleId>& targets);

 private:
  struct PendingDelivery {
    Packet pkt;  // hop_count already incremented for this arrival
    VehicleId from;
    bool to_station = false;
    VehicleId to_vehicle;
    StationId station;
  };

  using VehEvent = std::pair<VehicleId, EventId>;

  // tick phases
  void advance_world();
  void detect_phase();
  void announce_phase();
  void deliver_phase();
  void maintenance_phase();
  void roles_phase();
  void monitor_phase();

  void handle_vehicle_exit(const VehicleId& v);
  void handle_announcement(const VehicleId& v, const Packet& ann, const VehicleId& from);
  void route_monitoring(const VehicleId& v, const Packet& pkt);
  // attempted radio transmission; schedules the arrival unless the loss draw
  // kills it (both outcomes logged)
  void transmit_to_vehicle(const Packet& pkt, const VehicleId& from, const VehicleId& to);
  void transmit_to_station(const Packet& pkt, const VehicleId& from, const BaseStation& st);

  Packet make_packet(PacketKind kind, const EventId& ev, const VehicleId& origin);
  bool seen_before(const VehicleId& v, PacketId pid);  // marks as seen
  const std::vector<std::pair<VehicleId, Position>>& gateway_set(const EventId& ev);
  bool is_routing_member(const EventId& ev, const VehicleId& v) const;

  // --- immutable run setup --------------------------------------------------
  Scenario scenario_;
  SimClock clock_;
  Tick tick_count_ = 0;
  Tick latency_ticks_ = 1;
  Tick t_max_ticks_ = 0;
  Tick announce_ticks_ = 1;
  Tick monitor_period_ticks_ = 1;
  Tick maintenance_ticks_ = 1;
  Tick grace_ticks_ = 0;
  std::unique_ptr<ClusteringStrategy> strategy_;
  ClusterEngine cluster_;
  LinkModel link_;

  // --- world state ------------------------------------------------------------
  Tick now_ = 0;
  std::map<VehicleId, VehicleState, IdLess> vehicles_;
  std::vector<VehicleState> vehicles_vec_;
  Adjacency adjacency_;
  std::map<VehicleId, std::vector<const BaseStation*>, IdLess> stations_by_veh_;
  std::map<EventId, Position> event_pos_;  // active events this tick
  std::set<EventId> events_ended_;

  GroupTable groups_;
  std::set<VehEvent> detecting_now_;
  std::set<VehEvent> detection_history_;
  std::map<VehEvent, Tick> az_until_;
  std::map<VehEvent, Tick> next_announce_at_;
  std::map<VehEvent, Tick> next_monitor_at_;
  std::set<VehEvent> relayed_this_tick_;
  std::map<VehEvent, RoleSet> roles_;

  std::map<Tick, std::vector<PendingDelivery>> in_flight_;

  // duplicate suppression: (packet id, dense vehicle index)
  std::map<VehicleId, std::uint32_t, IdLess> veh_index_;
  std::unordered_set<std::uint64_t> seen_;

  // per-tick gateway cache, invalidated on any group-table change
  std::map<EventId, std::vector<std::pair<VehicleId, Position>>> gateway_cache_;
  Tick gateway_cache_tick_ = -1;
  std::uint64_t gateway_cache_version_ = ~0ull;

  PacketId next_packet_id_ = 1;
  GroupId next_group_id_ = 1;

  SimLog log_;
};

}  // namespace minuet
