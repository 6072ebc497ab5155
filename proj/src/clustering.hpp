#pragma once

#include <map>
#include <optional>
#include <vector>

#include "radio.hpp"
#include "types.hpp"

namespace minuet {

class Simulation;

// ---------------------------------------------------------------------------
// group bookkeeping
// ---------------------------------------------------------------------------

struct MemberState {
  Tick joined_at = 0;
  // set while the member sits outside the leader's radio range; eviction
  // fires once the spell exceeds the grace period
  std::optional<Tick> out_of_range_since;
};

struct Group {
  GroupId gid = 0;
  EventId event;
  VehicleId leader;
  Tick formed_at = 0;
  // active members transmit (beacons, joins) and carry monitoring traffic
  std::map<VehicleId, MemberState, IdLess> members;
  // recorded silently; no transmissions, no routing duty (pctt_like only)
  IdSet passive;
};

class GroupTable {
 public:
  // every mutation bumps version() so per-tick caches can invalidate
  std::uint64_t version() const { return version_; }

  Group& create(GroupId gid, const EventId& ev, const VehicleId& leader, Tick now);
  void dissolve(GroupId gid);
  void add_member(GroupId gid, const VehicleId& v, Tick now);
  void remove_member(GroupId gid, const VehicleId& v);
  void add_passive(GroupId gid, const VehicleId& v);
  void remove_passive(GroupId gid, const VehicleId& v);

  const Group* find(GroupId gid) const;
  Group* find(GroupId gid);
  // group the vehicle actively belongs to for this event, if any
  std::optional<GroupId> member_group(const EventId& ev, const VehicleId& v) const;
  std::optional<GroupId> passive_group(const EventId& ev, const VehicleId& v) const;
  bool is_active_member(const EventId& ev, const VehicleId& v) const {
    return member_group(ev, v).has_value();
  }

  std::vector<GroupId> groups_of(const EventId& ev) const;  // ascending gid
  const std::map<GroupId, Group>& all() const { return groups_; }
  // mutable walk for per-member bookkeeping (grace timers); membership itself
  // must still go through add/remove so version() stays honest
  std::map<GroupId, Group>& all_mut() { return groups_; }

  // drops the vehicle from every group; returns the events whose groups
  // lost their leader (those groups are dissolved here)
  std::vector<EventId> remove_vehicle_everywhere(const VehicleId& v);

 private:
  std::map<GroupId, Group> groups_;
  std::map<std::pair<EventId, VehicleId>, GroupId> member_index_;
  std::map<std::pair<EventId, VehicleId>, GroupId> passive_index_;
  std::uint64_t version_ = 0;
};

// Highest current neighbor degree wins; ties break toward the lowest id.
// Degree counts all radio neighbors, not just other candidates.
VehicleId elect_leader(const std::vector<VehicleId>& candidates, const Adjacency& adj);

// ---------------------------------------------------------------------------
// strategies
// ---------------------------------------------------------------------------

// The two cluster managers differ only in who is allowed to take an active
// part (transmit clustering packets, relay, lead): dca_like admits every
// vehicle inside the announcement zone, pctt_like only vehicles that have
// detected the event at least once; everyone else is recorded passively.
class ClusteringStrategy {
 public:
  virtual ~ClusteringStrategy() = default;
  virtual StrategyKind kind() const = 0;
  virtual bool may_cooperate(const Simulation& sim, const VehicleId& v,
                             const EventId& ev) const = 0;
};

class DcaLikeStrategy final : public ClusteringStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::dca_like; }
  bool may_cooperate(const Simulation&, const VehicleId&, const EventId&) const override {
    return true;
  }
};

class PcttLikeStrategy final : public ClusteringStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::pctt_like; }
  bool may_cooperate(const Simulation& sim, const VehicleId& v,
                     const EventId& ev) const override;
};

// ---------------------------------------------------------------------------
// cluster engine (shared machinery, strategy decides participation)
// ---------------------------------------------------------------------------

class ClusterEngine {
 public:
  explicit ClusterEngine(const ClusteringStrategy& strategy) : strategy_(strategy) {}

  // first valid copy of an announcement reached v (or v generated it)
  void on_announcement(Simulation& sim, const VehicleId& v, const EventId& ev);
  // pctt promotion: a passively recorded vehicle just detected the event
  void on_detection(Simulation& sim, const VehicleId& v, const EventId& ev);
  // periodic sweep: evictions, leader checks, re-formation, beacons
  void maintenance(Simulation& sim);
  void on_vehicle_exit(Simulation& sim, const VehicleId& v);
  void on_event_end(Simulation& sim, const EventId& ev);

  const ClusteringStrategy& strategy() const { return strategy_; }

 private:
  // join the nearest in-range group or start a fresh one
  void join_or_form(Simulation& sim, const VehicleId& v, const EventId& ev);
  std::optional<GroupId> nearest_joinable(const Simulation& sim, const VehicleId& v,
                                          const EventId& ev) const;
  void form_group(Simulation& sim, const VehicleId& leader,
                  const std::vector<VehicleId>& members, const EventId& ev);

  const ClusteringStrategy& strategy_;
};

}  // namespace minuet
