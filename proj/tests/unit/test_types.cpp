#include <cmath>

#include "doctest.h"
#include "types.hpp"

using namespace minuet;

TEST_CASE("id ordering compares pure numbers by value") {
  CHECK(id_less("4", "17"));
  CHECK_FALSE(id_less("17", "4"));
  CHECK(id_less("9", "10"));
  CHECK_FALSE(id_less("10", "10"));
  // leading zeros do not change the numeric value
  CHECK_FALSE(id_less("7", "007"));
  CHECK(id_less("007", "7"));  // equal value: some stable order, not both ways
  CHECK(id_less("0", "1"));
}

TEST_CASE("id ordering falls back to lexicographic for non-numeric ids") {
  CHECK(id_less("v17", "v4"));  // plain string order
  CHECK_FALSE(id_less("v4", "v17"));
  CHECK(id_less("abc", "abd"));
  CHECK_FALSE(id_less("abc", "abc"));
  CHECK(id_less("12a", "12b"));  // mixed: lexicographic
}

TEST_CASE("euclidean distance") {
  CHECK(distance({0, 0}, {3, 4}) == doctest::Approx(5.0));
  CHECK(distance({1, 1}, {1, 1}) == doctest::Approx(0.0));
  CHECK(distance({-3, 0}, {0, 4}) == doctest::Approx(5.0));
}

TEST_CASE("clock converts between seconds and ticks exactly on tick boundaries") {
  SimClock clock{0.1};
  CHECK(clock.ticks(0.0) == 0);
  CHECK(clock.ticks(1.0) == 10);
  CHECK(clock.ticks(0.3) == 3);  // 0.3 is not representable; llround must save it
  CHECK(clock.seconds(10) == doctest::Approx(1.0));
}

TEST_CASE("role sets format and parse through the same names") {
  RoleSet none;
  CHECK(role_set_name(none) == "none");
  CHECK(parse_roles("none").has_value());
  CHECK(parse_roles("none")->empty());

  RoleSet all;
  all.add(Role::monitor);
  all.add(Role::relay);
  all.add(Role::gateway);
  CHECK(role_set_name(all) == "monitor+relay+gateway");
  CHECK(parse_roles("monitor+relay+gateway") == all);

  RoleSet mg;
  mg.add(Role::monitor);
  mg.add(Role::gateway);
  CHECK(role_set_name(mg) == "monitor+gateway");
  CHECK(parse_roles(role_set_name(mg)) == mg);

  CHECK_FALSE(parse_roles("driver").has_value());
  CHECK_FALSE(parse_roles("monitor+").has_value());
  CHECK_FALSE(parse_roles("").has_value());
}

TEST_CASE("packet kind, strategy, and event kind parsers round-trip") {
  for (PacketKind k : {PacketKind::announcement, PacketKind::clustering, PacketKind::monitoring}) {
    CHECK(parse_packet_kind(packet_kind_name(k)) == k);
  }
  CHECK_FALSE(parse_packet_kind("datagram").has_value());

  for (StrategyKind k : {StrategyKind::dca_like, StrategyKind::pctt_like}) {
    CHECK(parse_strategy(strategy_name(k)) == k);
  }
  CHECK_FALSE(parse_strategy("greedy").has_value());

  CHECK(parse_event_kind("fixed") == EventKind::fixed);
  CHECK(parse_event_kind("mobile") == EventKind::mobile);
  CHECK_FALSE(parse_event_kind("roaming").has_value());
}

TEST_CASE("bounds containment") {
  Bounds b{0, 0, 10, 10};
  CHECK(b.contains({0, 0}));
  CHECK(b.contains({10, 10}));
  CHECK(b.contains({5, 5}));
  CHECK_FALSE(b.contains({10.001, 5}));
  CHECK_FALSE(b.contains({5, -0.001}));
}
