#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace minuet {

// ---------------------------------------------------------------------------
// vehicle traces
// ---------------------------------------------------------------------------

struct TraceSample {
  double t_s = 0.0;
  Position pos;
  double speed_mps = 0.0;
  double heading_rad = 0.0;
};

// Piecewise-linear vehicle trajectory. A vehicle exists in the world exactly
// on [enter_s, exit_s] (= first/last sample time).
struct VehicleTrace {
  VehicleId id;
  std::vector<TraceSample> samples;  // strictly increasing t_s

  double enter_s() const { return samples.front().t_s; }
  double exit_s() const { return samples.back().t_s; }
};

// Line-oriented trace text: one sample per line,
//   time vehicle_id x y speed heading
// with '#' comments and an optional leading header row. Samples must arrive
// in non-decreasing time order per vehicle, duplicates are an error. On
// failure returns std::nullopt and fills `errors` (one entry per offending
// line, each naming the line number).
std::optional<std::vector<VehicleTrace>> load_traces(std::istream& in,
                                                     std::vector<std::string>& errors);
std::optional<std::vector<VehicleTrace>> load_traces_file(const std::string& path,
                                                          std::vector<std::string>& errors);

// Position (plus speed/heading held from the segment start) at time t, or
// nullopt when the vehicle is not in the scenario at t.
std::optional<VehicleState> state_at(const VehicleTrace& trace, double t_s);

// ---------------------------------------------------------------------------
// scenario (the resolved, runnable description; parsing/validation of the
// on-disk format lives in scenario_config)
// ---------------------------------------------------------------------------

struct Scenario {
  std::string name;
  double duration_s = 0.0;
  double tick_s = 0.1;
  std::uint64_t seed = 1;
  Bounds bounds;

  std::vector<VehicleTrace> traces;   // sorted by vehicle id
  std::vector<EventSpec> events;      // sorted by event id
  std::vector<BaseStation> stations;  // sorted by station id

  RadioConfig radio;
  ProtocolConfig protocol;
  ClusteringConfig clustering;
};

// Vehicles present at time t, sorted by id.
std::vector<VehicleState> active_vehicles(const Scenario& scenario, double t_s);

// Event position at t; nullopt outside [t_start, t_end].
std::optional<Position> event_position_at(const EventSpec& event, double t_s);

// ---------------------------------------------------------------------------
// synthetic traffic
// ---------------------------------------------------------------------------

// One directed road with Poisson vehicle arrivals; every vehicle drives the
// full segment at an individual constant speed drawn uniformly from
// speed_mps +/- speed_jitter_mps.
struct FlowSpec {
  Position from;
  Position to;
  double rate_per_s = 0.0;
  double speed_mps = 10.0;
  double speed_jitter_mps = 0.0;
};

// Expands flows into concrete traces for a run of the given duration. The
// flows are pre-warmed: arrivals start early enough that the road is in
// steady state at t = 0 (vehicles mid-segment get a clipped first sample).
// Deterministic for a given (flows, seed, duration).
std::vector<VehicleTrace> generate_flow_traces(const std::vector<FlowSpec>& flows,
                                               double duration_s,
                                               std::uint64_t seed);

}  // namespace minuet
