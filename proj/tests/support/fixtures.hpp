#pragma once

// Small hand-built scenarios for engine tests. Everything here constructs
// Scenario structs directly (no JSON round trip) so tests can pin exact
// geometry and timing.

#include <string>
#include <vector>

#include "mobility.hpp"
#include "types.hpp"

namespace testutil {

using namespace minuet;

// vehicle parked at (x, y) for [t0, t1]
inline VehicleTrace parked(const std::string& id, double x, double y, double t0, double t1) {
  VehicleTrace tr;
  tr.id = id;
  tr.samples.push_back({t0, {x, y}, 0.0, 0.0});
  tr.samples.push_back({t1, {x, y}, 0.0, 0.0});
  return tr;
}

inline EventSpec fixed_event(const std::string& id, double x, double y, double t0, double t1) {
  EventSpec e;
  e.id = id;
  e.kind = EventKind::fixed;
  e.t_start_s = t0;
  e.t_end_s = t1;
  e.waypoints.push_back({t0, {x, y}});
  return e;
}

inline BaseStation station(const std::string& id, double x, double y, double range) {
  return BaseStation{id, {x, y}, range};
}

// Baseline scenario skeleton: lossless radio, one announcement per second,
// one monitoring packet per second, 0.1 s ticks.
inline Scenario base_scenario(double duration_s) {
  Scenario sc;
  sc.name = "fixture";
  sc.duration_s = duration_s;
  sc.tick_s = 0.1;
  sc.seed = 1;
  sc.bounds = {-10000.0, -10000.0, 10000.0, 10000.0};
  sc.radio.v2v_range_m = 200.0;
  sc.radio.detection_range_m = 10.0;
  sc.radio.loss_probability = 0.0;
  sc.radio.hop_latency_s = 0.1;
  sc.protocol.t_max_s = 1.5;
  sc.protocol.announce_interval_s = 1.0;
  sc.protocol.monitor_rate_pps = 1.0;
  sc.protocol.payload_bytes = 64;
  sc.clustering.strategy = StrategyKind::dca_like;
  sc.clustering.maintenance_interval_s = 1.0;
  sc.clustering.grace_intervals = 2;
  return sc;
}

// n parked vehicles in a line on the x axis: v0 at x0, spaced `gap` apart,
// present for the whole run. An event sits on v0 so only v0 ever detects
// (gap must exceed the 10 m detection range).
inline Scenario chain_scenario(int n, double gap, double duration_s,
                               double event_t0, double event_t1) {
  Scenario sc = base_scenario(duration_s);
  for (int i = 0; i < n; ++i) {
    sc.traces.push_back(parked("v" + std::to_string(i), gap * i, 0.0, 0.0, duration_s));
  }
  sc.events.push_back(fixed_event("ev", 0.0, 0.0, event_t0, event_t1));
  return sc;
}

}  // namespace testutil
