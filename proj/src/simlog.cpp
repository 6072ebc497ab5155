#include "simlog.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace minuet {

const char* drop_cause_name(DropCause c) {
  switch (c) {
    case DropCause::loss:
      return "loss";
    case DropCause::az_expired:
      return "az_expired";
    case DropCause::receiver_gone:
      return "receiver_gone";
  }
  return "?";
}

std::optional<DropCause> parse_drop_cause(const std::string& text) {
  if (text == "loss") return DropCause::loss;
  if (text == "az_expired") return DropCause::az_expired;
  if (text == "receiver_gone") return DropCause::receiver_gone;
  return std::nullopt;
}

void SimLog::nv(Tick t, std::uint32_t count) {
  Record r;
  r.t = t;
  r.kind = RecordKind::active_count;
  r.count = count;
  records.push_back(std::move(r));
}

void SimLog::detect(Tick t, const VehicleId& v, const EventId& e) {
  Record r;
  r.t = t;
  r.kind = RecordKind::detect;
  r.veh = v;
  r.ev = e;
  records.push_back(std::move(r));
}

void SimLog::generated(Tick t, const Packet& p) {
  Record r;
  r.t = t;
  r.kind = RecordKind::generated;
  r.id = p.id;
  r.pkind = p.kind;
  r.ev = p.event;
  r.veh = p.origin;
  r.payload = p.payload_bytes;
  r.t_max_s = p.kind == PacketKind::announcement ? p.t_max_s : -1.0;
  records.push_back(std::move(r));
}

void SimLog::forwarded(Tick t, PacketId pid, const std::string& from,
                       const std::string& to, std::uint32_t hop) {
  Record r;
  r.t = t;
  r.kind = RecordKind::forwarded;
  r.id = pid;
  r.veh = from;
  r.peer = to;
  r.hop = hop;
  records.push_back(std::move(r));
}

void SimLog::received(Tick t, PacketId pid, const StationId& station, std::uint32_t hop) {
  Record r;
  r.t = t;
  r.kind = RecordKind::received;
  r.id = pid;
  r.peer = station;
  r.hop = hop;
  records.push_back(std::move(r));
}

void SimLog::dropped(Tick t, PacketId pid, DropCause cause) {
  Record r;
  r.t = t;
  r.kind = RecordKind::dropped;
  r.id = pid;
  r.peer = drop_cause_name(cause);
  records.push_back(std::move(r));
}

void SimLog::group_formed(Tick t, GroupId gid, const EventId& e, const VehicleId& leader) {
  Record r;
  r.t = t;
  r.kind = RecordKind::group_formed;
  r.id = gid;
  r.ev = e;
  r.veh = leader;
  records.push_back(std::move(r));
}

void SimLog::role_change(Tick t, const VehicleId& v, const EventId& e, RoleSet roles) {
  Record r;
  r.t = t;
  r.kind = RecordKind::role_change;
  r.veh = v;
  r.ev = e;
  r.peer = role_set_name(roles);
  records.push_back(std::move(r));
}

int time_decimals(double tick_s) {
  for (int d = 0; d <= 6; ++d) {
    const double scaled = tick_s * std::pow(10.0, d);
    if (std::abs(scaled - std::llround(scaled)) < 1e-9 && std::llround(scaled) > 0) {
      return d;
    }
  }
  return 6;
}

std::string format_seconds(double seconds, int decimals) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, seconds);
  return buf;
}

namespace {

// trims trailing zeros; for header doubles that are not tick-aligned
std::string format_general(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void serialize(const SimLog& log, std::ostream& out) {
  out << "# minuet simlog v1\n";
  out << "# scenario " << log.scenario << "\n";
  out << "# strategy " << log.strategy << "\n";
  out << "# seed " << log.seed << "\n";
  out << "# tick_s " << format_general(log.tick_s) << "\n";
  out << "# duration_s " << format_general(log.duration_s) << "\n";
  out << "# hop_latency_s " << format_general(log.hop_latency_s) << "\n";
  for (const EventMeta& e : log.events) {
    out << "# event " << e.id << " " << event_kind_name(e.kind) << " "
        << format_general(e.t_start_s) << " " << format_general(e.t_end_s) << "\n";
  }

  const int dec = time_decimals(log.tick_s);
  const SimClock clock{log.tick_s};
  for (const Record& r : log.records) {
    out << format_seconds(clock.seconds(r.t), dec);
    switch (r.kind) {
      case RecordKind::active_count:
        out << " nv " << r.count;
        break;
      case RecordKind::detect:
        out << " detect " << r.veh << " " << r.ev;
        break;
      case RecordKind::generated:
        out << " gen p" << r.id << " " << packet_kind_name(r.pkind) << " " << r.ev << " "
            << r.veh << " " << r.payload;
        if (r.pkind == PacketKind::announcement) out << " " << format_general(r.t_max_s);
        break;
      case RecordKind::forwarded:
        out << " fwd p" << r.id << " " << r.veh << " " << r.peer << " " << r.hop;
        break;
      case RecordKind::received:
        out << " recv p" << r.id << " " << r.peer << " " << r.hop;
        break;
      case RecordKind::dropped:
        out << " drop p" << r.id << " " << r.peer;
        break;
      case RecordKind::group_formed:
        out << " group g" << r.id << " " << r.ev << " " << r.veh;
        break;
      case RecordKind::role_change:
        out << " role " << r.veh << " " << r.ev << " " << r.peer;
        break;
    }
    out << "\n";
  }
}

std::string serialize_to_string(const SimLog& log) {
  std::ostringstream os;
  serialize(log, os);
  return os.str();
}

namespace {

bool parse_u64(const std::string& tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  try {
    size_t used = 0;
    out = std::stoull(tok, &used);
    return used == tok.size();
  } catch (...) {
    return false;
  }
}

bool parse_f64(const std::string& tok, double& out) {
  try {
    size_t used = 0;
    out = std::stod(tok, &used);
    return used == tok.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

// "p123" -> 123, "g7" -> 7
bool parse_prefixed_id(const std::string& tok, char prefix, std::uint64_t& out) {
  if (tok.size() < 2 || tok[0] != prefix) return false;
  return parse_u64(tok.substr(1), out);
}

}  // namespace

std::optional<SimLog> parse_simlog(std::istream& in, std::vector<std::string>& errors) {
  SimLog log;
  SimClock clock{log.tick_s};
  std::string line;
  int line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    const auto fail = [&](const std::string& why) {
      errors.push_back("line " + std::to_string(line_no) + ": " + why);
    };

    if (tok[0] == "#") {
      if (tok.size() >= 3 && tok[1] == "scenario") {
        log.scenario = tok[2];
      } else if (tok.size() >= 3 && tok[1] == "strategy") {
        log.strategy = tok[2];
      } else if (tok.size() >= 3 && tok[1] == "seed") {
        parse_u64(tok[2], log.seed);
      } else if (tok.size() >= 3 && tok[1] == "tick_s") {
        if (!parse_f64(tok[2], log.tick_s) || log.tick_s <= 0.0) {
          fail("bad tick_s header");
        }
        clock.tick_s = log.tick_s;
      } else if (tok.size() >= 3 && tok[1] == "duration_s") {
        if (!parse_f64(tok[2], log.duration_s)) fail("bad duration_s header");
      } else if (tok.size() >= 3 && tok[1] == "hop_latency_s") {
        if (!parse_f64(tok[2], log.hop_latency_s)) fail("bad hop_latency_s header");
      } else if (tok.size() >= 6 && tok[1] == "event") {
        EventMeta e;
        e.id = tok[2];
        if (tok[3] == "fixed") {
          e.kind = EventKind::fixed;
        } else if (tok[3] == "mobile") {
          e.kind = EventKind::mobile;
        } else {
          fail("bad event kind in header");
          continue;
        }
        if (!parse_f64(tok[4], e.t_start_s) || !parse_f64(tok[5], e.t_end_s)) {
          fail("bad event times in header");
          continue;
        }
        log.events.push_back(std::move(e));
      }
      continue;  // unknown '#' lines are comments
    }

    if (tok.size() < 2) {
      fail("record needs at least a time and a kind");
      continue;
    }
    double t_s;
    if (!parse_f64(tok[0], t_s) || t_s < 0.0) {
      fail("bad record time");
      continue;
    }
    Record r;
    r.t = clock.ticks(t_s);
    const std::string& kind = tok[1];

    if (kind == "nv" && tok.size() == 3) {
      std::uint64_t c;
      if (!parse_u64(tok[2], c)) {
        fail("bad nv count");
        continue;
      }
      r.kind = RecordKind::active_count;
      r.count = static_cast<std::uint32_t>(c);
    } else if (kind == "detect" && tok.size() == 4) {
      r.kind = RecordKind::detect;
      r.veh = tok[2];
      r.ev = tok[3];
    } else if (kind == "gen" && (tok.size() == 7 || tok.size() == 8)) {
      r.kind = RecordKind::generated;
      std::uint64_t payload;
      auto pk = parse_packet_kind(tok[3]);
      if (!parse_prefixed_id(tok[2], 'p', r.id) || !pk || !parse_u64(tok[6], payload)) {
        fail("bad gen record");
        continue;
      }
      r.pkind = *pk;
      r.ev = tok[4];
      r.veh = tok[5];
      r.payload = static_cast<std::uint32_t>(payload);
      if (tok.size() == 8 && !parse_f64(tok[7], r.t_max_s)) {
        fail("bad gen t_max");
        continue;
      }
      if (r.pkind == PacketKind::announcement && tok.size() != 8) {
        fail("announcement gen record missing t_max");
        continue;
      }
    } else if (kind == "fwd" && tok.size() == 6) {
      r.kind = RecordKind::forwarded;
      std::uint64_t hop;
      if (!parse_prefixed_id(tok[2], 'p', r.id) || !parse_u64(tok[5], hop)) {
        fail("bad fwd record");
        continue;
      }
      r.veh = tok[3];
      r.peer = tok[4];
      r.hop = static_cast<std::uint32_t>(hop);
    } else if (kind == "recv" && tok.size() == 5) {
      r.kind = RecordKind::received;
      std::uint64_t hop;
      if (!parse_prefixed_id(tok[2], 'p', r.id) || !parse_u64(tok[4], hop)) {
        fail("bad recv record");
        continue;
      }
      r.peer = tok[3];
      r.hop = static_cast<std::uint32_t>(hop);
    } else if (kind == "drop" && tok.size() == 4) {
      r.kind = RecordKind::dropped;
      if (!parse_prefixed_id(tok[2], 'p', r.id) || !parse_drop_cause(tok[3])) {
        fail("bad drop record");
        continue;
      }
      r.peer = tok[3];
    } else if (kind == "group" && tok.size() == 5) {
      r.kind = RecordKind::group_formed;
      if (!parse_prefixed_id(tok[2], 'g', r.id)) {
        fail("bad group record");
        continue;
      }
      r.ev = tok[3];
      r.veh = tok[4];
    } else if (kind == "role" && tok.size() == 5) {
      r.kind = RecordKind::role_change;
      if (!parse_roles(tok[4])) {
        fail("bad role set");
        continue;
      }
      r.veh = tok[2];
      r.ev = tok[3];
      r.peer = tok[4];
    } else {
      fail("unknown record kind or wrong field count: " + kind);
      continue;
    }

    if (!log.records.empty() && r.t < log.records.back().t) {
      fail("record time went backwards");
      continue;
    }
    log.records.push_back(std::move(r));
  }

  if (!errors.empty()) return std::nullopt;
  return log;
}

}  // namespace minuet
