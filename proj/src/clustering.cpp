#include "clustering.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include "engine.hpp"

namespace minuet {

// ---------------------------------------------------------------------------
// GroupTable
// ---------------------------------------------------------------------------

Group& GroupTable::create(GroupId gid, const EventId& ev, const VehicleId& leader, Tick now) {
  ++version_;
  Group& g = groups_[gid];
  g.gid = gid;
  g.event = ev;
  g.leader = leader;
  g.formed_at = now;
  g.members.emplace(leader, MemberState{now, std::nullopt});
  member_index_[{ev, leader}] = gid;
  return g;
}

void GroupTable::dissolve(GroupId gid) {
  auto it = groups_.find(gid);
  if (it == groups_.end()) return;
  ++version_;
  for (const auto& [v, ms] : it->second.members) member_index_.erase({it->second.event, v});
  for (const auto& v : it->second.passive) passive_index_.erase({it->second.event, v});
  groups_.erase(it);
}

void GroupTable::add_member(GroupId gid, const VehicleId& v, Tick now) {
  Group* g = find(gid);
  if (!g) return;
  ++version_;
  g->members.emplace(v, MemberState{now, std::nullopt});
  member_index_[{g->event, v}] = gid;
}

void GroupTable::remove_member(GroupId gid, const VehicleId& v) {
  Group* g = find(gid);
  if (!g) return;
  ++version_;
  g->members.erase(v);
  member_index_.erase({g->event, v});
}

void GroupTable::add_passive(GroupId gid, const VehicleId& v) {
  Group* g = find(gid);
  if (!g) return;
  ++version_;
  g->passive.insert(v);
  passive_index_[{g->event, v}] = gid;
}

void GroupTable::remove_passive(GroupId gid, const VehicleId& v) {
  Group* g = find(gid);
  if (!g) return;
  ++version_;
  g->passive.erase(v);
  passive_index_.erase({g->event, v});
}

const Group* GroupTable::find(GroupId gid) const {
  auto it = groups_.find(gid);
  return it == groups_.end() ? nullptr : &it->second;
}

Group* GroupTable::find(GroupId gid) {
  auto it = groups_.find(gid);
  return it == groups_.end() ? nullptr : &it->second;
}

std::optional<GroupId> GroupTable::member_group(const EventId& ev, const VehicleId& v) const {
  auto it = member_index_.find({ev, v});
  if (it == member_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<GroupId> GroupTable::passive_group(const EventId& ev, const VehicleId& v) const {
  auto it = passive_index_.find({ev, v});
  if (it == passive_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<GroupId> GroupTable::groups_of(const EventId& ev) const {
  std::vector<GroupId> out;
  for (const auto& [gid, g] : groups_) {
    if (g.event == ev) out.push_back(gid);
  }
  return out;
}

std::vector<EventId> GroupTable::remove_vehicle_everywhere(const VehicleId& v) {
  std::vector<EventId> orphaned;
  std::vector<GroupId> to_dissolve;
  std::vector<std::pair<GroupId, bool>> to_remove;  // bool: passive
  for (auto& [gid, g] : groups_) {
    if (g.leader == v) {
      to_dissolve.push_back(gid);
      orphaned.push_back(g.event);
    } else if (g.members.count(v)) {
      to_remove.push_back({gid, false});
    } else if (g.passive.count(v)) {
      to_remove.push_back({gid, true});
    }
  }
  for (auto [gid, passive] : to_remove) {
    if (passive) {
      remove_passive(gid, v);
    } else {
      remove_member(gid, v);
    }
  }
  for (GroupId gid : to_dissolve) dissolve(gid);
  return orphaned;
}

// ---------------------------------------------------------------------------
// leader election
// ---------------------------------------------------------------------------

VehicleId elect_leader(const std::vector<VehicleId>& candidates, const Adjacency& adj) {
  assert(!candidates.empty());
  const VehicleId* best = nullptr;
  size_t best_degree = 0;
  for (const VehicleId& v : candidates) {
    auto it = adj.find(v);
    const size_t degree = it == adj.end() ? 0 : it->second.size();
    if (!best || degree > best_degree || (degree == best_degree && id_less(v, *best))) {
      best = &v;
      best_degree = degree;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// strategies
// ---------------------------------------------------------------------------

bool PcttLikeStrategy::may_cooperate(const Simulation& sim, const VehicleId& v,
                                     const EventId& ev) const {
  return sim.has_detected(v, ev);
}

// ---------------------------------------------------------------------------
// ClusterEngine
// ---------------------------------------------------------------------------

std::optional<GroupId> ClusterEngine::nearest_joinable(const Simulation& sim,
                                                       const VehicleId& v,
                                                       const EventId& ev) const {
  const VehicleState* vs = sim.vehicle(v);
  if (!vs) return std::nullopt;
  std::optional<GroupId> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (GroupId gid : sim.groups().groups_of(ev)) {
    const Group* g = sim.groups().find(gid);
    const VehicleState* leader = sim.vehicle(g->leader);
    if (!leader) continue;
    const double d = distance(vs->pos, leader->pos);
    if (d > sim.v2v_range()) continue;
    if (d < best_dist) {  // gid ascending already breaks distance ties
      best_dist = d;
      best = gid;
    }
  }
  return best;
}

void ClusterEngine::form_group(Simulation& sim, const VehicleId& leader,
                               const std::vector<VehicleId>& members, const EventId& ev) {
  const GroupId gid = sim.next_group_id();
  sim.groups().create(gid, ev, leader, sim.now());
  sim.log_group_formed(gid, ev, leader);
  // formation beacon from the leader to whoever can hear it
  auto adj_it = sim.adjacency().find(leader);
  sim.emit_clustering(leader, ev,
                      adj_it == sim.adjacency().end() ? std::vector<VehicleId>{}
                                                      : adj_it->second);
  for (const VehicleId& m : members) {
    if (m == leader) continue;
    sim.groups().add_member(gid, m, sim.now());
    sim.emit_clustering(m, ev, {leader});  // join notification
  }
}

void ClusterEngine::join_or_form(Simulation& sim, const VehicleId& v, const EventId& ev) {
  if (auto gid = nearest_joinable(sim, v, ev)) {
    const Group* g = sim.groups().find(*gid);
    if (auto pg = sim.groups().passive_group(ev, v)) sim.groups().remove_passive(*pg, v);
    sim.groups().add_member(*gid, v, sim.now());
    sim.emit_clustering(v, ev, {g->leader});
    return;
  }
  if (auto pg = sim.groups().passive_group(ev, v)) sim.groups().remove_passive(*pg, v);
  form_group(sim, v, {v}, ev);
}

void ClusterEngine::on_announcement(Simulation& sim, const VehicleId& v, const EventId& ev) {
  if (!sim.event_active(ev)) return;
  if (sim.groups().is_active_member(ev, v)) return;  // already clustered

  if (strategy_.may_cooperate(sim, v, ev)) {
    join_or_form(sim, v, ev);
    return;
  }
  // pctt_like, never detected: record membership passively, transmit nothing
  if (sim.groups().passive_group(ev, v)) return;
  if (auto gid = nearest_joinable(sim, v, ev)) sim.groups().add_passive(*gid, v);
}

void ClusterEngine::on_detection(Simulation& sim, const VehicleId& v, const EventId& ev) {
  // promotion path: a passively recorded vehicle is now a detector
  if (sim.groups().is_active_member(ev, v)) return;
  if (!sim.groups().passive_group(ev, v)) return;
  if (!strategy_.may_cooperate(sim, v, ev)) return;
  join_or_form(sim, v, ev);
}

void ClusterEngine::maintenance(Simulation& sim) {
  GroupTable& groups = sim.groups();
  const Tick now = sim.now();

  // pass 1: leader liveness, member range checks, evictions
  std::vector<GroupId> dead_groups;
  std::vector<std::pair<GroupId, VehicleId>> evict;
  std::vector<std::pair<GroupId, VehicleId>> evict_passive;
  for (auto& [gid, g] : groups.all_mut()) {
    if (!sim.event_active(g.event)) {
      dead_groups.push_back(gid);
      continue;
    }
    const VehicleState* leader = sim.vehicle(g.leader);
    if (!leader) {  // exits dissolve eagerly; defensive
      dead_groups.push_back(gid);
      continue;
    }
    for (auto& [v, ms] : g.members) {
      if (v == g.leader) continue;
      const VehicleState* vs = sim.vehicle(v);
      if (!vs) {
        evict.push_back({gid, v});
        continue;
      }
      if (distance(vs->pos, leader->pos) > sim.v2v_range()) {
        if (!ms.out_of_range_since) ms.out_of_range_since = now;
        if (now - *ms.out_of_range_since > sim.grace_ticks()) evict.push_back({gid, v});
      } else {
        ms.out_of_range_since.reset();
      }
    }
    for (const VehicleId& v : g.passive) {
      const VehicleState* vs = sim.vehicle(v);
      if (!vs || distance(vs->pos, leader->pos) > sim.v2v_range()) {
        evict_passive.push_back({gid, v});
      }
    }
  }
  for (const auto& [gid, v] : evict) {
    groups.remove_member(gid, v);
    // leave notification, heard by whoever is still around
    if (sim.vehicle(v)) {
      auto adj_it = sim.adjacency().find(v);
      sim.emit_clustering(v, groups.find(gid)->event,
                          adj_it == sim.adjacency().end() ? std::vector<VehicleId>{}
                                                          : adj_it->second);
    }
  }
  for (const auto& [gid, v] : evict_passive) groups.remove_passive(gid, v);
  for (GroupId gid : dead_groups) groups.dissolve(gid);

  // pass 2: sweep unclustered announcement-zone vehicles into groups.
  // dca_like re-clusters everyone proactively; pctt_like only detectors,
  // the rest get a passive association when one is in reach.
  for (const EventSpec& spec : sim.scenario().events) {
    const EventId& ev = spec.id;
    if (!sim.event_active(ev)) continue;

    std::vector<VehicleId> active_pool;
    std::vector<VehicleId> passive_pool;
    for (const VehicleId& v : sim.az_vehicles(ev)) {
      if (sim.groups().is_active_member(ev, v)) continue;
      if (strategy_.may_cooperate(sim, v, ev)) {
        active_pool.push_back(v);
      } else if (!sim.groups().passive_group(ev, v)) {
        passive_pool.push_back(v);
      }
    }

    // join existing groups first, then batch-form what remains
    std::vector<VehicleId> leftover;
    for (const VehicleId& v : active_pool) {
      if (auto gid = nearest_joinable(sim, v, ev)) {
        const Group* g = sim.groups().find(*gid);
        if (auto pg = sim.groups().passive_group(ev, v)) sim.groups().remove_passive(*pg, v);
        sim.groups().add_member(*gid, v, now);
        sim.emit_clustering(v, ev, {g->leader});
      } else {
        leftover.push_back(v);
      }
    }
    while (!leftover.empty()) {
      const VehicleId lead = elect_leader(leftover, sim.adjacency());
      const VehicleState* ls = sim.vehicle(lead);
      std::vector<VehicleId> cohort;
      std::vector<VehicleId> rest;
      for (const VehicleId& v : leftover) {
        const VehicleState* vs = sim.vehicle(v);
        if (v == lead || (ls && vs && distance(vs->pos, ls->pos) <= sim.v2v_range())) {
          cohort.push_back(v);
        } else {
          rest.push_back(v);
        }
      }
      form_group(sim, lead, cohort, ev);
      leftover = std::move(rest);
    }

    for (const VehicleId& v : passive_pool) {
      if (auto gid = nearest_joinable(sim, v, ev)) sim.groups().add_passive(*gid, v);
    }
  }

  // pass 3: keep-alive beacons, one clustering packet per active member
  for (const auto& [gid, g] : groups.all()) {
    if (!sim.event_active(g.event)) continue;
    const VehicleState* leader = sim.vehicle(g.leader);
    for (const auto& [v, ms] : g.members) {
      if (v == g.leader) {
        // leader beacons to its in-range members
        std::vector<VehicleId> targets;
        for (const auto& [m, mms] : g.members) {
          if (m == v) continue;
          const VehicleState* mv = sim.vehicle(m);
          if (leader && mv && distance(mv->pos, leader->pos) <= sim.v2v_range()) {
            targets.push_back(m);
          }
        }
        sim.emit_clustering(v, g.event, targets);
      } else {
        const VehicleState* vs = sim.vehicle(v);
        std::vector<VehicleId> targets;
        if (leader && vs && distance(vs->pos, leader->pos) <= sim.v2v_range()) {
          targets.push_back(g.leader);
        }
        sim.emit_clustering(v, g.event, targets);
      }
    }
  }
}

void ClusterEngine::on_vehicle_exit(Simulation& sim, const VehicleId& v) {
  sim.groups().remove_vehicle_everywhere(v);
  // orphaned members are re-swept at the next maintenance tick (dca_like) or
  // rejoin on the next announcement they hear
}

void ClusterEngine::on_event_end(Simulation& sim, const EventId& ev) {
  for (GroupId gid : sim.groups().groups_of(ev)) sim.groups().dissolve(gid);
}

}  // namespace minuet
