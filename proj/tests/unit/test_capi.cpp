#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "minuet.h"

using nlohmann::json;

namespace {

struct ScenarioHandle {
  minuet_scenario* sc = nullptr;
  ~ScenarioHandle() { minuet_scenario_free(sc); }
};

struct RunHandle {
  minuet_run* run = nullptr;
  ~RunHandle() { minuet_run_free(run); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { minuet_string_free(s); }
};

}  // namespace

TEST_CASE("version and status names are stable strings") {
  REQUIRE(minuet_version() != nullptr);
  CHECK(std::string(minuet_version()).find('.') != std::string::npos);
  CHECK(std::string(minuet_status_name(MINUET_OK)) == "ok");
  CHECK(minuet_status_name(MINUET_ERR_PARSE) != nullptr);
  CHECK(minuet_status_name(MINUET_ERR_VALIDATION) != nullptr);
}

TEST_CASE("builtin scenario list names each loadable scenario") {
  const std::string names = minuet_builtin_scenarios();
  CHECK(names.find("smoke") != std::string::npos);
  CHECK(names.find("clique") != std::string::npos);
  CHECK(names.find("paper_ld") != std::string::npos);
  CHECK(names.find("paper_hd") != std::string::npos);

  // every listed name loads
  size_t start = 0;
  while (start < names.size()) {
    size_t end = names.find('\n', start);
    if (end == std::string::npos) end = names.size();
    const std::string name = names.substr(start, end - start);
    start = end + 1;
    if (name.empty()) continue;
    ScenarioHandle h;
    char err[256];
    CHECK(minuet_scenario_builtin(name.c_str(), &h.sc, err, sizeof err) == MINUET_OK);
    CHECK(h.sc != nullptr);
  }
}

TEST_CASE("scenario handles expose name, hash and canonical document") {
  ScenarioHandle h;
  char err[256] = {0};
  REQUIRE(minuet_scenario_builtin("smoke", &h.sc, err, sizeof err) == MINUET_OK);

  CHECK(std::string(minuet_scenario_name(h.sc)) == "smoke");
  const std::string hash = minuet_scenario_hash(h.sc);
  CHECK(hash.size() == 16);

  OwnedString doc;
  REQUIRE(minuet_scenario_canonical_json(h.sc, &doc.s, err, sizeof err) == MINUET_OK);
  const json parsed = json::parse(doc.s);
  CHECK(parsed.at("name") == "smoke");
  CHECK(parsed.contains("tick_s"));
  CHECK(parsed.contains("strategy"));
}

TEST_CASE("seed and strategy overrides re-resolve the scenario") {
  ScenarioHandle h;
  char err[256] = {0};
  REQUIRE(minuet_scenario_builtin("smoke", &h.sc, err, sizeof err) == MINUET_OK);
  const std::string before = minuet_scenario_hash(h.sc);

  REQUIRE(minuet_scenario_set_seed(h.sc, 99, err, sizeof err) == MINUET_OK);
  const std::string after_seed = minuet_scenario_hash(h.sc);
  CHECK(after_seed != before);

  REQUIRE(minuet_scenario_set_strategy(h.sc, "pctt_like", err, sizeof err) == MINUET_OK);
  OwnedString doc;
  REQUIRE(minuet_scenario_canonical_json(h.sc, &doc.s, err, sizeof err) == MINUET_OK);
  CHECK(json::parse(doc.s).at("strategy") == "pctt_like");

  CHECK(minuet_scenario_set_strategy(h.sc, "bogus", err, sizeof err) ==
        MINUET_ERR_UNKNOWN_NAME);
  CHECK(std::strlen(err) > 0);
}

TEST_CASE("error paths return the documented status codes and messages") {
  char err[256];
  minuet_scenario* sc = nullptr;

  SUBCASE("unknown builtin") {
    err[0] = 0;
    CHECK(minuet_scenario_builtin("atlantis", &sc, err, sizeof err) ==
          MINUET_ERR_UNKNOWN_NAME);
    CHECK(sc == nullptr);
    CHECK(std::strlen(err) > 0);
  }
  SUBCASE("unreadable file") {
    err[0] = 0;
    CHECK(minuet_scenario_from_file("/no/such/dir/sc.json", &sc, err, sizeof err) ==
          MINUET_ERR_IO);
    CHECK(std::strlen(err) > 0);
  }
  SUBCASE("malformed json") {
    err[0] = 0;
    CHECK(minuet_scenario_from_json("{not json", &sc, err, sizeof err) == MINUET_ERR_PARSE);
    CHECK(std::strlen(err) > 0);
  }
  SUBCASE("valid json failing validation names the offending field") {
    err[0] = 0;
    CHECK(minuet_scenario_from_json("{\"name\":\"x\"}", &sc, err, sizeof err) ==
          MINUET_ERR_VALIDATION);
    CHECK(std::string(err).find("duration_s") != std::string::npos);
  }
  SUBCASE("null arguments") {
    CHECK(minuet_scenario_builtin(nullptr, &sc, err, sizeof err) ==
          MINUET_ERR_INVALID_ARGUMENT);
    CHECK(minuet_scenario_builtin("smoke", nullptr, err, sizeof err) ==
          MINUET_ERR_INVALID_ARGUMENT);
    CHECK(minuet_simulate(nullptr, nullptr, nullptr, err, sizeof err) ==
          MINUET_ERR_INVALID_ARGUMENT);
  }
}

TEST_CASE("a run produces parseable summaries and a log") {
  ScenarioHandle h;
  char err[256] = {0};
  REQUIRE(minuet_scenario_builtin("smoke", &h.sc, err, sizeof err) == MINUET_OK);

  RunHandle r;
  REQUIRE_MESSAGE(minuet_simulate(h.sc, nullptr, &r.run, err, sizeof err) == MINUET_OK, err);

  OwnedString summary;
  REQUIRE(minuet_run_summary_json(r.run, &summary.s, err, sizeof err) == MINUET_OK);
  const json s = json::parse(summary.s);
  REQUIRE(s.contains("events"));
  REQUIRE(s.at("events").size() == 2);
  for (const auto& e : s.at("events")) {
    CHECK(e.contains("event"));
    CHECK(e.contains("monitored_share"));
    CHECK(e.contains("single_ratio"));
  }

  OwnedString text;
  REQUIRE(minuet_run_log_text(r.run, &text.s, err, sizeof err) == MINUET_OK);
  CHECK(std::string(text.s).rfind("# minuet simlog v1", 0) == 0);
}

TEST_CASE("artifact writing creates the manifest and every listed file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "minuet_capi_artifacts_test";
  fs::remove_all(dir);

  ScenarioHandle h;
  char err[512] = {0};
  REQUIRE(minuet_scenario_builtin("smoke", &h.sc, err, sizeof err) == MINUET_OK);
  RunHandle r;
  REQUIRE(minuet_simulate(h.sc, nullptr, &r.run, err, sizeof err) == MINUET_OK);
  REQUIRE_MESSAGE(minuet_run_write_artifacts(r.run, dir.string().c_str(), err, sizeof err) ==
                      MINUET_OK,
                  err);

  const fs::path manifest = dir / "smoke_dca_like_manifest.json";
  REQUIRE(fs::exists(manifest));
  std::ifstream in(manifest);
  const json m = json::parse(in);
  CHECK(m.at("scenario") == "smoke");
  CHECK(m.at("strategy") == "dca_like");
  for (const auto& f : m.at("files")) {
    CHECK(fs::exists(dir / f.get<std::string>()));
  }
  fs::remove_all(dir);
}

TEST_CASE("sweeps cover every strategy and seed in a stable order") {
  ScenarioHandle h;
  char err[512] = {0};
  REQUIRE(minuet_scenario_builtin("smoke", &h.sc, err, sizeof err) == MINUET_OK);

  OwnedString out;
  REQUIRE_MESSAGE(minuet_sweep_json(h.sc, "dca_like,pctt_like", "1,2,3", 1, nullptr, &out.s,
                                    err, sizeof err) == MINUET_OK,
                  err);
  const json doc = json::parse(out.s);
  REQUIRE(doc.is_object());
  CHECK(doc.at("scenario") == "smoke");
  const json& cells = doc.at("cells");
  REQUIRE(cells.is_array());
  REQUIRE(cells.size() == 6);
  CHECK(cells[0].at("strategy") == "dca_like");
  CHECK(cells[0].at("seed") == 1);
  CHECK(cells[3].at("strategy") == "pctt_like");
  CHECK(cells[5].at("seed") == 3);
  for (const auto& c : cells) {
    CHECK(c.contains("log_digest"));
    CHECK(c.contains("events"));
  }

  SUBCASE("bad inputs are rejected") {
    char* dummy = nullptr;
    CHECK(minuet_sweep_json(h.sc, "", "1", 1, nullptr, &dummy, err, sizeof err) ==
          MINUET_ERR_INVALID_ARGUMENT);
    CHECK(minuet_sweep_json(h.sc, "dca_like", "one,two", 1, nullptr, &dummy, err, sizeof err) ==
          MINUET_ERR_INVALID_ARGUMENT);
    CHECK(minuet_sweep_json(h.sc, "dca_like", "1", 0, nullptr, &dummy, err, sizeof err) ==
          MINUET_ERR_INVALID_ARGUMENT);
    CHECK(minuet_sweep_json(h.sc, "warp_like", "1", 1, nullptr, &dummy, err, sizeof err) ==
          MINUET_ERR_UNKNOWN_NAME);
  }
}
