// Command-line front end. Talks to the core exclusively through the C API.
#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "minuet.h"

namespace {

using nlohmann::json;

constexpr size_t kErrBufLen = 4096;

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

// A scenario reference is a built-in name or a path to a JSON file.
bool open_scenario(const std::string& ref, ScenarioHandle& out) {
  char errbuf[kErrBufLen];
  minuet_status st = minuet_scenario_builtin(ref.c_str(), &out.sc, errbuf, sizeof errbuf);
  if (st == MINUET_OK) return true;
  if (st != MINUET_ERR_UNKNOWN_NAME) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return false;
  }
  st = minuet_scenario_from_file(ref.c_str(), &out.sc, errbuf, sizeof errbuf);
  if (st == MINUET_OK) return true;
  std::string names = minuet_builtin_scenarios();
  std::replace(names.begin(), names.end(), '\n', ' ');
  std::fprintf(stderr,
               "error: \"%s\" is neither a built-in scenario (%s) nor a readable "
               "scenario file\n  %s: %s\n",
               ref.c_str(), names.c_str(), minuet_status_name(st), errbuf);
  return false;
}

bool apply_overrides(ScenarioHandle& h, const std::string& strategy, bool have_seed,
                     uint64_t seed) {
  char errbuf[kErrBufLen];
  if (!strategy.empty()) {
    if (minuet_scenario_set_strategy(h.sc, strategy.c_str(), errbuf, sizeof errbuf) !=
        MINUET_OK) {
      std::fprintf(stderr, "error: %s\n", errbuf);
      return false;
    }
  }
  if (have_seed) {
    if (minuet_scenario_set_seed(h.sc, seed, errbuf, sizeof errbuf) != MINUET_OK) {
      std::fprintf(stderr, "error: %s\n", errbuf);
      return false;
    }
  }
  return true;
}

double json_or_nan(const json& v) {
  return v.is_number() ? v.get<double>() : std::nan("");
}

void print_event_summary(const json& e) {
  std::printf("event %s (%s, %.1f-%.1f s)\n", e["event"].get<std::string>().c_str(),
              e["kind"].get<std::string>().c_str(), e["t_start_s"].get<double>(),
              e["t_end_s"].get<double>());
  std::printf("  packets generated: %" PRIu64 " announcement, %" PRIu64
              " clustering, %" PRIu64 " monitoring\n",
              e["announcements"].get<uint64_t>(), e["clustering_packets"].get<uint64_t>(),
              e["monitoring_packets"].get<uint64_t>());
  std::printf("  station receipts: %" PRIu64 " (%" PRIu64 " single, %" PRIu64
              " redundant)\n",
              e["receipts"].get<uint64_t>(), e["single_receipts"].get<uint64_t>(),
              e["redundant_receipts"].get<uint64_t>());
  const double sr = json_or_nan(e["single_ratio"]);
  const double rr = json_or_nan(e["redundant_ratio"]);
  if (!std::isnan(sr)) std::printf("  single/redundant ratio: %.4f / %.4f\n", sr, rr);
  const double d = json_or_nan(e["avg_delay_s"]);
  if (!std::isnan(d)) std::printf("  average delivery delay: %.4f s\n", d);
  const double c = json_or_nan(e["clustering_overhead"]);
  if (!std::isnan(c)) std::printf("  clustering overhead: %.4f\n", c);
  const double g = json_or_nan(e["grouped_ratio"]);
  if (!std::isnan(g)) std::printf("  grouped vehicle ratio: %.4f\n", g);
  std::printf("  groups formed: %" PRIu64 "\n", e["groups_formed"].get<uint64_t>());
  std::printf("  monitored share: %.4f   delivery share: %.4f\n",
              e["monitored_share"].get<double>(), e["delivery_share"].get<double>());
}

int cmd_run(const std::string& scenario_ref, const std::string& strategy,
            bool have_seed, uint64_t seed, const std::string& out_dir,
            const minuet_options& opts, bool quiet) {
  ScenarioHandle h;
  if (!open_scenario(scenario_ref, h)) return 1;
  if (!apply_overrides(h, strategy, have_seed, seed)) return 1;

  char errbuf[kErrBufLen];
  RunHandle run;
  if (minuet_simulate(h.sc, &opts, &run.run, errbuf, sizeof errbuf) != MINUET_OK) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return 1;
  }
  if (!out_dir.empty()) {
    if (minuet_run_write_artifacts(run.run, out_dir.c_str(), errbuf, sizeof errbuf) !=
        MINUET_OK) {
      std::fprintf(stderr, "error: %s\n", errbuf);
      return 1;
    }
  }
  OwnedString summary;
  if (minuet_run_summary_json(run.run, &summary.s, errbuf, sizeof errbuf) != MINUET_OK) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return 1;
  }
  const json j = json::parse(summary.s);
  if (!quiet) {
    std::printf("scenario %s  strategy %s  seed %" PRIu64 "  hash %s\n",
                j["scenario"].get<std::string>().c_str(),
                j["strategy"].get<std::string>().c_str(), j["seed"].get<uint64_t>(),
                minuet_scenario_hash(h.sc));
    for (const auto& e : j["events"]) {
      std::printf("\n");
      print_event_summary(e);
    }
    if (!out_dir.empty()) std::printf("\nartifacts written to %s/\n", out_dir.c_str());
  }
  return 0;
}

int cmd_compare(const std::string& scenario_ref, const std::string& strategies,
                const std::string& seeds, int threads, const minuet_options& opts) {
  ScenarioHandle h;
  if (!open_scenario(scenario_ref, h)) return 1;

  char errbuf[kErrBufLen];
  OwnedString out;
  if (minuet_sweep_json(h.sc, strategies.c_str(), seeds.c_str(), threads, &opts, &out.s,
                        errbuf, sizeof errbuf) != MINUET_OK) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return 1;
  }
  const json sweep = json::parse(out.s);

  // means per (event, strategy, metric) over seeds
  static const char* kMetrics[] = {
      "monitored_share",  "delivery_share",     "avg_delay_s",
      "single_ratio",     "redundant_ratio",    "clustering_overhead",
      "grouped_ratio",    "groups_formed",      "announcements",
      "clustering_packets", "monitoring_packets", "receipts"};

  std::vector<std::string> strategy_order;
  std::vector<std::string> event_order;
  for (const auto& cell : sweep["cells"]) {
    const std::string st = cell["strategy"].get<std::string>();
    bool known = false;
    for (const auto& s : strategy_order) known = known || s == st;
    if (!known) strategy_order.push_back(st);
    for (const auto& e : cell["events"]) {
      const std::string ev = e["event"].get<std::string>();
      bool seen = false;
      for (const auto& x : event_order) seen = seen || x == ev;
      if (!seen) event_order.push_back(ev);
    }
  }

  std::printf("scenario %s  seeds %s  threads %d\n",
              sweep["scenario"].get<std::string>().c_str(), seeds.c_str(), threads);
  for (const auto& ev : event_order) {
    std::printf("\nevent %s\n", ev.c_str());
    std::printf("  %-22s", "metric");
    for (const auto& st : strategy_order) std::printf("%16s", st.c_str());
    std::printf("\n");
    for (const char* metric : kMetrics) {
      std::printf("  %-22s", metric);
      for (const auto& st : strategy_order) {
        double sum = 0;
        int n = 0;
        for (const auto& cell : sweep["cells"]) {
          if (cell["strategy"].get<std::string>() != st) continue;
          for (const auto& e : cell["events"]) {
            if (e["event"].get<std::string>() != ev) continue;
            const double v = json_or_nan(e[metric]);
            if (!std::isnan(v)) {
              sum += v;
              ++n;
            }
          }
        }
        if (n)
          std::printf("%16.4f", sum / n);
        else
          std::printf("%16s", "-");
      }
      std::printf("\n");
    }
  }
  return 0;
}

int cmd_canonical(const std::string& scenario_ref) {
  ScenarioHandle h;
  if (!open_scenario(scenario_ref, h)) return 1;
  char errbuf[kErrBufLen];
  OwnedString out;
  if (minuet_scenario_canonical_json(h.sc, &out.s, errbuf, sizeof errbuf) != MINUET_OK) {
    std::fprintf(stderr, "error: %s\n", errbuf);
    return 1;
  }
  std::fputs(out.s, stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minuet: cooperative vehicular event monitoring simulator"};
  app.set_version_flag("--version", std::string(minuet_version()));
  app.require_subcommand(1);

  std::string scenario_ref;
  std::string strategy;
  uint64_t seed = 0;
  std::string out_dir = "out";
  std::string strategies = "dca_like,pctt_like";
  std::string seeds = "1,2,3,4,5";
  int threads = 1;
  bool literal_group_denominator = false;
  bool per_unique_delay = false;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "simulate one scenario and write artifacts");
  run->add_option("--scenario", scenario_ref, "built-in name or scenario JSON file")
      ->required();
  run->add_option("--strategy", strategy, "dca_like or pctt_like");
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_dir, "artifact directory (empty: write nothing)")
      ->capture_default_str();
  run->add_flag("--literal-group-denominator", literal_group_denominator,
                "grouped-ratio denominator integrates n(n+1)/2");
  run->add_flag("--per-unique-delay", per_unique_delay,
                "average delay over first receipts only");
  run->add_flag("--quiet", quiet, "suppress the summary printout");

  auto* compare = app.add_subcommand(
      "compare", "run a strategy x seed sweep and print per-event metric means");
  compare->add_option("--scenario", scenario_ref, "built-in name or scenario JSON file")
      ->required();
  compare->add_option("--strategies", strategies, "comma-separated strategy list")
      ->capture_default_str();
  compare->add_option("--seeds", seeds, "comma-separated seed list")
      ->capture_default_str();
  compare->add_option("--threads", threads, "worker threads")->capture_default_str();
  compare->add_flag("--literal-group-denominator", literal_group_denominator,
                    "grouped-ratio denominator integrates n(n+1)/2");
  compare->add_flag("--per-unique-delay", per_unique_delay,
                    "average delay over first receipts only");

  auto* scenarios = app.add_subcommand("scenarios", "list built-in scenarios");

  auto* canonical = app.add_subcommand(
      "canonical", "print the fully-defaulted (canonical) scenario document");
  canonical->add_option("--scenario", scenario_ref, "built-in name or scenario JSON file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  minuet_options opts{};
  opts.literal_group_denominator = literal_group_denominator ? 1 : 0;
  opts.per_unique_delay = per_unique_delay ? 1 : 0;

  if (run->parsed())
    return cmd_run(scenario_ref, strategy, seed_opt->count() > 0, seed, out_dir, opts,
                   quiet);
  if (compare->parsed()) return cmd_compare(scenario_ref, strategies, seeds, threads, opts);
  if (scenarios->parsed()) {
    std::printf("%s\n", minuet_builtin_scenarios());
    return 0;
  }
  if (canonical->parsed()) return cmd_canonical(scenario_ref);
  return 1;
}
