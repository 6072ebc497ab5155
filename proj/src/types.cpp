#include "types.hpp"

#include <algorithm>
#include <cctype>

namespace minuet {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

bool id_less(const std::string& a, const std::string& b) {
  if (all_digits(a) && all_digits(b)) {
    // Compare by numeric value without overflowing: shorter (after leading
    // zeros) means smaller, equal length falls back to lexicographic.
    const auto strip = [](const std::string& s) {
      size_t i = s.find_first_not_of('0');
      return i == std::string::npos ? std::string("0") : s.substr(i);
    };
    const std::string sa = strip(a);
    const std::string sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;  // "007" vs "7": keep an order, any stable one
  }
  return a < b;
}

const char* event_kind_name(EventKind k) {
  return k == EventKind::fixed ? "fixed" : "mobile";
}

std::optional<EventKind> parse_event_kind(const std::string& text) {
  if (text == "fixed") return EventKind::fixed;
  if (text == "mobile") return EventKind::mobile;
  return std::nullopt;
}

std::string role_set_name(RoleSet roles) {
  if (roles.empty()) return "none";
  std::string out;
  const auto append = [&](Role r, const char* name) {
    if (!roles.has(r)) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  append(Role::monitor, "monitor");
  append(Role::relay, "relay");
  append(Role::gateway, "gateway");
  return out;
}

std::optional<RoleSet> parse_roles(const std::string& text) {
  RoleSet roles;
  if (text == "none") return roles;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('+', start);
    const std::string part =
        text.substr(start, end == std::string::npos ? end : end - start);
    if (part == "monitor") {
      roles.add(Role::monitor);
    } else if (part == "relay") {
      roles.add(Role::relay);
    } else if (part == "gateway") {
      roles.add(Role::gateway);
    } else {
      return std::nullopt;
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return roles;
}

const char* packet_kind_name(PacketKind k) {
  switch (k) {
    case PacketKind::announcement:
      return "announcement";
    case PacketKind::clustering:
      return "clustering";
    case PacketKind::monitoring:
      return "monitoring";
  }
  return "?";
}

std::optional<PacketKind> parse_packet_kind(const std::string& text) {
  if (text == "announcement") return PacketKind::announcement;
  if (text == "clustering") return PacketKind::clustering;
  if (text == "monitoring") return PacketKind::monitoring;
  return std::nullopt;
}

const char* strategy_name(StrategyKind k) {
  return k == StrategyKind::dca_like ? "dca_like" : "pctt_like";
}

std::optional<StrategyKind> parse_strategy(const std::string& text) {
  if (text == "dca_like") return StrategyKind::dca_like;
  if (text == "pctt_like") return StrategyKind::pctt_like;
  return std::nullopt;
}

}  // namespace minuet
