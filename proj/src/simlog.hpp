#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace minuet {

// ---------------------------------------------------------------------------
// SimLog: the append-only run record. Everything the metrics engine computes
// comes from this structure alone; the text form (one record per line,
// "<t> <kind> <fields...>", '#' header lines up front) is the stable contract
// and round-trips through serialize/parse.
// ---------------------------------------------------------------------------

enum class RecordKind {
  active_count,  // nv <count>                      vehicles in the world this tick
  detect,        // detect <vehicle> <event>
  generated,     // gen <pid> <kind> <event> <origin> <payload> [<t_max_s>]
  forwarded,     // fwd <pid> <from> <to> <hop>     one transmission (v2v or v2i)
  received,      // recv <pid> <station> <hop>      delivery at a base station
  dropped,       // drop <pid> <cause>
  group_formed,  // group <gid> <event> <leader>
  role_change,   // role <vehicle> <event> <roles>
};

enum class DropCause { loss, az_expired, receiver_gone };

const char* drop_cause_name(DropCause c);
std::optional<DropCause> parse_drop_cause(const std::string& text);

struct Record {
  Tick t = 0;
  RecordKind kind = RecordKind::active_count;

  std::uint64_t id = 0;       // packet id, or group id for group_formed
  PacketKind pkind = PacketKind::announcement;  // generated
  std::uint32_t count = 0;    // active_count
  std::uint32_t hop = 0;      // forwarded / received
  std::uint32_t payload = 0;  // generated
  double t_max_s = -1.0;      // generated announcements

  std::string veh;   // detect / role vehicle; gen origin; fwd sender; group leader
  std::string ev;    // detect / gen / group / role event
  std::string peer;  // fwd receiver; recv station; drop cause; role set text
};

struct EventMeta {
  EventId id;
  EventKind kind = EventKind::fixed;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
};

struct SimLog {
  // header
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  double tick_s = 0.1;
  double duration_s = 0.0;
  double hop_latency_s = 0.1;
  std::vector<EventMeta> events;

  std::vector<Record> records;  // non-decreasing t

  Tick tick_count() const {
    return static_cast<Tick>(std::llround(duration_s / tick_s));
  }

  // record builders (append in call order)
  void nv(Tick t, std::uint32_t count);
  void detect(Tick t, const VehicleId& v, const EventId& e);
  void generated(Tick t, const Packet& p);
  void forwarded(Tick t, PacketId pid, const std::string& from, const std::string& to,
                 std::uint32_t hop);
  void received(Tick t, PacketId pid, const StationId& station, std::uint32_t hop);
  void dropped(Tick t, PacketId pid, DropCause cause);
  void group_formed(Tick t, GroupId gid, const EventId& e, const VehicleId& leader);
  void role_change(Tick t, const VehicleId& v, const EventId& e, RoleSet roles);
};

// Fixed-point second formatting: exactly enough decimals for the tick length,
// so identical runs serialize to identical bytes.
int time_decimals(double tick_s);
std::string format_seconds(double seconds, int decimals);

void serialize(const SimLog& log, std::ostream& out);
std::string serialize_to_string(const SimLog& log);

// Parses the text form back; returns nullopt and fills `errors` (with line
// numbers) on malformed input.
std::optional<SimLog> parse_simlog(std::istream& in, std::vector<std::string>& errors);

}  // namespace minuet
