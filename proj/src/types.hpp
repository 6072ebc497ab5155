#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace minuet {

// ---------------------------------------------------------------------------
// geometry
// ---------------------------------------------------------------------------

// Planar scenario coordinates, meters.
struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(const Position& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

// ---------------------------------------------------------------------------
// time
// ---------------------------------------------------------------------------

// Simulation time is an integer count of fixed-length ticks. Seconds appear
// only at the configuration and file-format boundary; keeping the hot path in
// integers makes run output reproducible to the byte.
using Tick = std::int64_t;

struct SimClock {
  double tick_s = 0.1;

  double seconds(Tick t) const { return static_cast<double>(t) * tick_s; }
  Tick ticks(double seconds_value) const {
    return static_cast<Tick>(std::llround(seconds_value / tick_s));
  }
};

// ---------------------------------------------------------------------------
// identifiers
// ---------------------------------------------------------------------------

using VehicleId = std::string;
using EventId = std::string;
using StationId = std::string;
using PacketId = std::uint64_t;
using GroupId = std::uint64_t;

// Natural id ordering: two all-digit ids compare numerically ("4" < "17"),
// anything else falls back to lexicographic. Used everywhere an id tie-break
// or a stable iteration order is needed.
bool id_less(const std::string& a, const std::string& b);

struct IdLess {
  using is_transparent = void;
  bool operator()(const std::string& a, const std::string& b) const {
    return id_less(a, b);
  }
};

using IdSet = std::set<std::string, IdLess>;

// ---------------------------------------------------------------------------
// world objects
// ---------------------------------------------------------------------------

struct VehicleState {
  VehicleId id;
  Position pos;
  double speed_mps = 0.0;
  double heading_rad = 0.0;  // [0, 2*pi)
};

enum class EventKind { fixed, mobile };

const char* event_kind_name(EventKind k);
std::optional<EventKind> parse_event_kind(const std::string& text);

struct EventWaypoint {
  double t_s = 0.0;
  Position pos;
};

// A monitored happening in the scenario. Fixed events hold one position for
// their whole lifetime; mobile events interpolate along timed waypoints.
struct EventSpec {
  EventId id;
  EventKind kind = EventKind::fixed;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  std::vector<EventWaypoint> waypoints;  // fixed: single entry

  bool active_at(double t_s) const { return t_s >= t_start_s && t_s <= t_end_s; }
};

struct BaseStation {
  StationId id;
  Position pos;
  double range_m = 0.0;
};

// ---------------------------------------------------------------------------
// roles
// ---------------------------------------------------------------------------

enum class Role : std::uint8_t {
  monitor = 1u << 0,
  relay = 1u << 1,
  gateway = 1u << 2,
};

// Small bitmask set; roles combine freely on one vehicle.
struct RoleSet {
  std::uint8_t bits = 0;

  bool has(Role r) const { return (bits & static_cast<std::uint8_t>(r)) != 0; }
  void add(Role r) { bits |= static_cast<std::uint8_t>(r); }
  bool empty() const { return bits == 0; }
  friend bool operator==(const RoleSet&, const RoleSet&) = default;
};

// "monitor+gateway", or "none" for an empty set. Parseable by parse_roles.
std::string role_set_name(RoleSet roles);
std::optional<RoleSet> parse_roles(const std::string& text);

// ---------------------------------------------------------------------------
// packets
// ---------------------------------------------------------------------------

enum class PacketKind { announcement, clustering, monitoring };

const char* packet_kind_name(PacketKind k);
std::optional<PacketKind> parse_packet_kind(const std::string& text);

struct Packet {
  PacketId id = 0;
  PacketKind kind = PacketKind::announcement;
  EventId event;
  VehicleId origin;
  Tick created_at = 0;
  double t_max_s = -1.0;  // announcement zone age bound; announcements only
  std::uint32_t hop_count = 0;
  std::uint32_t payload_bytes = 0;
};

// ---------------------------------------------------------------------------
// configuration blocks (behavior lives in the radio / clustering / protocol
// modules; these are the plain knobs they read)
// ---------------------------------------------------------------------------

struct RadioConfig {
  double v2v_range_m = 200.0;
  double detection_range_m = 10.0;
  double loss_probability = 0.0;  // i.i.d. Bernoulli per link transmission
  double hop_latency_s = 0.1;     // one tick by default
};

struct ProtocolConfig {
  double t_max_s = 1.5;
  double announce_interval_s = 1.0;
  double monitor_rate_pps = 10.0;
  std::uint32_t payload_bytes = 512;
};

enum class StrategyKind { dca_like, pctt_like };

const char* strategy_name(StrategyKind k);
std::optional<StrategyKind> parse_strategy(const std::string& text);

struct ClusteringConfig {
  StrategyKind strategy = StrategyKind::dca_like;
  double maintenance_interval_s = 1.0;
  int grace_intervals = 2;
};

}  // namespace minuet
