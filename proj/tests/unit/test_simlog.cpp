#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "simlog.hpp"
#include "support/random_log.hpp"

using namespace minuet;

TEST_CASE("second formatting uses exactly the precision the tick needs") {
  CHECK(time_decimals(1.0) == 0);
  CHECK(time_decimals(0.1) == 1);
  CHECK(time_decimals(0.05) == 2);
  CHECK(time_decimals(0.001) == 3);
  CHECK(format_seconds(12.34, 1) == "12.3");
  CHECK(format_seconds(12.0, 0) == "12");
  CHECK(format_seconds(0.25, 2) == "0.25");
}

TEST_CASE("a log with every record kind round-trips through text byte-exactly") {
  SimLog log;
  log.scenario = "trip";
  log.strategy = "pctt_like";
  log.seed = 123456789;
  log.tick_s = 0.1;
  log.duration_s = 2.0;
  log.hop_latency_s = 0.1;
  log.events.push_back({"evA", EventKind::fixed, 0.0, 1.5});
  log.events.push_back({"evB", EventKind::mobile, 0.5, 2.0});

  log.nv(0, 3);
  log.detect(0, "v1", "evA");
  Packet ann;
  ann.id = 1;
  ann.kind = PacketKind::announcement;
  ann.event = "evA";
  ann.origin = "v1";
  ann.created_at = 0;
  ann.t_max_s = 1.5;
  ann.payload_bytes = 64;
  log.generated(0, ann);
  Packet mon = ann;
  mon.id = 2;
  mon.kind = PacketKind::monitoring;
  mon.t_max_s = -1.0;
  log.generated(0, mon);
  log.forwarded(0, 2, "v1", "v2", 1);
  log.nv(1, 3);
  log.dropped(1, 1, DropCause::az_expired);
  log.received(1, 2, "s1", 1);
  RoleSet rs;
  rs.add(Role::monitor);
  rs.add(Role::gateway);
  log.role_change(1, "v1", "evA", rs);
  log.group_formed(1, 7, "evA", "v1");
  log.role_change(19, "v1", "evA", RoleSet{});

  const std::string text = serialize_to_string(log);
  std::istringstream in(text);
  std::vector<std::string> errors;
  const auto back = parse_simlog(in, errors);
  REQUIRE_MESSAGE(back.has_value(), (errors.empty() ? std::string() : errors[0]));
  CHECK(errors.empty());

  CHECK(back->scenario == log.scenario);
  CHECK(back->strategy == log.strategy);
  CHECK(back->seed == log.seed);
  CHECK(back->tick_s == log.tick_s);
  CHECK(back->duration_s == log.duration_s);
  REQUIRE(back->events.size() == 2);
  CHECK(back->events[1].kind == EventKind::mobile);
  REQUIRE(back->records.size() == log.records.size());

  // serialize(parse(serialize(log))) is byte-identical
  CHECK(serialize_to_string(*back) == text);
}

TEST_CASE("randomized logs round-trip byte-exactly") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SimLog log = testutil::random_log(seed);
    const std::string text = serialize_to_string(log);
    std::istringstream in(text);
    std::vector<std::string> errors;
    const auto back = parse_simlog(in, errors);
    REQUIRE(back.has_value());
    CHECK(serialize_to_string(*back) == text);
  }
}

TEST_CASE("log parse errors name the offending line") {
  std::vector<std::string> errors;

  SUBCASE("unknown record kind") {
    std::istringstream in("0.0 teleport v1\n");
    CHECK_FALSE(parse_simlog(in, errors).has_value());
    REQUIRE_FALSE(errors.empty());
    CHECK(errors[0].find("line 1") != std::string::npos);
  }
  SUBCASE("wrong field count") {
    std::istringstream in("0.0 detect v1\n");
    CHECK_FALSE(parse_simlog(in, errors).has_value());
    REQUIRE_FALSE(errors.empty());
    CHECK(errors[0].find("line 1") != std::string::npos);
  }
  SUBCASE("time going backwards") {
    std::istringstream in("1.0 nv 3\n0.5 nv 3\n");
    CHECK_FALSE(parse_simlog(in, errors).has_value());
    REQUIRE_FALSE(errors.empty());
    CHECK(errors[0].find("line 2") != std::string::npos);
  }
  SUBCASE("malformed number") {
    std::istringstream in("0.0 nv many\n");
    CHECK_FALSE(parse_simlog(in, errors).has_value());
    REQUIRE_FALSE(errors.empty());
  }
}
