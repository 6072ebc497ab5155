#include "artifacts.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "engine.hpp"

namespace minuet {

namespace {

constexpr const char* kVersion = "0.1.0";

bool write_text_file(const std::string& path, const std::string& content,
                     std::vector<std::string>& errors) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    errors.push_back("cannot open for writing: " + path);
    return false;
  }
  f << content;
  f.flush();
  if (!f) {
    errors.push_back("write failed: " + path);
    return false;
  }
  return true;
}

std::string opt_fixed(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : std::string();
}

}  // namespace

std::string library_version() { return kVersion; }

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

RunResult execute_run(const Scenario& scenario, const SummaryOptions& opts) {
  Simulation sim(scenario);
  sim.run();
  RunResult r;
  r.log = sim.take_log();
  r.series = compute_series(r.log);
  r.summaries = summarize(r.log, opts);
  return r;
}

std::string render_series_csv(const SimLog& log, const std::vector<std::uint32_t>& values) {
  const int dec = time_decimals(log.tick_s);
  std::string out = "t,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += format_seconds(static_cast<double>(i) * log.tick_s, dec);
    out += ',';
    out += std::to_string(values[i]);
    out += '\n';
  }
  return out;
}

std::string render_summary_csv(const std::vector<MetricSummary>& summaries) {
  std::string out =
      "event,kind,t_start_s,t_end_s,announcements,clustering_packets,"
      "monitoring_packets,receipts,single_receipts,redundant_receipts,"
      "single_ratio,redundant_ratio,avg_delay_s,clustering_overhead,"
      "grouped_ratio,groups_formed,monitored_share,delivery_share\n";
  for (const auto& s : summaries) {
    out += s.event;
    out += ',';
    out += event_kind_name(s.kind);
    out += ',';
    out += format_fixed(s.t_start_s, 3);
    out += ',';
    out += format_fixed(s.t_end_s, 3);
    out += ',';
    out += std::to_string(s.ap_g);
    out += ',';
    out += std::to_string(s.cp_g);
    out += ',';
    out += std::to_string(s.mp_g);
    out += ',';
    out += std::to_string(s.redundancy.total);
    out += ',';
    out += std::to_string(s.redundancy.single);
    out += ',';
    out += std::to_string(s.redundancy.redundant);
    out += ',';
    out += s.redundancy.total ? format_fixed(s.redundancy.single_ratio, 6) : std::string();
    out += ',';
    out += s.redundancy.total ? format_fixed(s.redundancy.redundant_ratio, 6) : std::string();
    out += ',';
    out += opt_fixed(s.d_avg_s, 6);
    out += ',';
    out += opt_fixed(s.c_ratio, 6);
    out += ',';
    out += opt_fixed(s.g_ratio, 6);
    out += ',';
    out += std::to_string(s.f_groups);
    out += ',';
    out += format_fixed(s.monitored_share, 6);
    out += ',';
    out += format_fixed(s.delivery_share, 6);
    out += '\n';
  }
  return out;
}

std::string render_summary_text(const SimLog& log,
                                const std::vector<MetricSummary>& summaries) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "scenario %s  strategy %s  seed %llu\n",
                log.scenario.c_str(), log.strategy.c_str(),
                static_cast<unsigned long long>(log.seed));
  out += line;
  std::snprintf(line, sizeof line, "duration %.3f s  tick %.3f s  events %zu\n",
                log.duration_s, log.tick_s, log.events.size());
  out += line;
  for (const auto& s : summaries) {
    std::snprintf(line, sizeof line, "\nevent %s (%s, %.1f-%.1f s)\n", s.event.c_str(),
                  event_kind_name(s.kind), s.t_start_s, s.t_end_s);
    out += line;
    std::snprintf(line, sizeof line,
                  "  packets generated: %llu announcement, %llu clustering, %llu "
                  "monitoring\n",
                  static_cast<unsigned long long>(s.ap_g),
                  static_cast<unsigned long long>(s.cp_g),
                  static_cast<unsigned long long>(s.mp_g));
    out += line;
    std::snprintf(line, sizeof line,
                  "  station receipts: %llu (%llu single, %llu redundant)\n",
                  static_cast<unsigned long long>(s.redundancy.total),
                  static_cast<unsigned long long>(s.redundancy.single),
                  static_cast<unsigned long long>(s.redundancy.redundant));
    out += line;
    if (s.redundancy.total) {
      std::snprintf(line, sizeof line, "  single/redundant ratio: %.4f / %.4f\n",
                    s.redundancy.single_ratio, s.redundancy.redundant_ratio);
      out += line;
    }
    if (s.d_avg_s) {
      std::snprintf(line, sizeof line, "  average delivery delay: %.4f s\n", *s.d_avg_s);
      out += line;
    }
    if (s.c_ratio) {
      std::snprintf(line, sizeof line, "  clustering overhead: %.4f\n", *s.c_ratio);
      out += line;
    }
    if (s.g_ratio) {
      std::snprintf(line, sizeof line, "  grouped vehicle ratio: %.4f\n", *s.g_ratio);
      out += line;
    }
    std::snprintf(line, sizeof line, "  groups formed: %llu\n",
                  static_cast<unsigned long long>(s.f_groups));
    out += line;
    std::snprintf(line, sizeof line, "  monitored share: %.4f   delivery share: %.4f\n",
                  s.monitored_share, s.delivery_share);
    out += line;
  }
  return out;
}

std::optional<nlohmann::json> write_artifacts(const std::string& out_dir,
                                              const ResolvedScenario& resolved,
                                              const RunResult& result,
                                              std::vector<std::string>& errors) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    errors.push_back("cannot create output directory " + out_dir + ": " + ec.message());
    return std::nullopt;
  }

  const SimLog& log = result.log;
  const std::string base = log.scenario + "_" + log.strategy;
  const std::string dir = out_dir + "/";
  std::vector<std::string> files;

  auto emit = [&](const std::string& name, const std::string& content) {
    if (write_text_file(dir + name, content, errors)) files.push_back(name);
  };

  emit(base + "_simlog.txt", serialize_to_string(log));

  for (const auto& s : result.series) {
    emit(base + "_" + s.event + "_detecting.csv", render_series_csv(log, s.n_vd));
    emit(base + "_" + s.event + "_clustered.csv", render_series_csv(log, s.n_vc));
    emit(base + "_" + s.event + "_cp_gen.csv", render_series_csv(log, s.cp_g));
    emit(base + "_" + s.event + "_mp_gen.csv", render_series_csv(log, s.mp_g));
    emit(base + "_" + s.event + "_mp_recv.csv", render_series_csv(log, s.mp_r));
  }

  emit(base + "_summary.csv", render_summary_csv(result.summaries));
  emit(base + "_summary.txt", render_summary_text(log, result.summaries));

  nlohmann::json manifest;
  manifest["scenario"] = log.scenario;
  manifest["scenario_hash"] = resolved.hash;
  manifest["strategy"] = log.strategy;
  manifest["seed"] = log.seed;
  manifest["tick_s"] = log.tick_s;
  manifest["duration_s"] = log.duration_s;
  manifest["version"] = kVersion;
  manifest["events"] = nlohmann::json::array();
  for (const auto& e : log.events) manifest["events"].push_back(e.id);
  manifest["files"] = files;

  const std::string manifest_name = base + "_manifest.json";
  if (!write_text_file(dir + manifest_name, manifest.dump(2) + "\n", errors))
    return std::nullopt;
  if (!errors.empty()) return std::nullopt;
  return manifest;
}

std::optional<std::vector<SweepCell>> run_sweep(const SweepSpec& spec,
                                                std::vector<std::string>& errors) {
  struct Job {
    StrategyKind strategy;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (StrategyKind st : spec.strategies)
    for (std::uint64_t seed : spec.seeds) jobs.push_back({st, seed});
  if (jobs.empty()) {
    errors.push_back("sweep has no strategy/seed combinations");
    return std::nullopt;
  }

  std::vector<SweepCell> cells(jobs.size());
  std::vector<std::vector<std::string>> job_errors(jobs.size());

  auto run_job = [&](std::size_t i) {
    const Job& job = jobs[i];
    nlohmann::json doc = spec.base_doc;
    override_strategy(doc, job.strategy);
    override_seed(doc, job.seed);
    auto resolved = resolve_scenario(doc, "", job_errors[i]);
    if (!resolved) return;
    RunResult r = execute_run(resolved->scenario, spec.opts);
    SweepCell& cell = cells[i];
    cell.strategy = job.strategy;
    cell.seed = job.seed;
    cell.scenario_hash = resolved->hash;
    const std::string text = serialize_to_string(r.log);
    cell.log_digest = fnv1a_hex(text);
    cell.log_bytes = text.size();
    cell.summaries = std::move(r.summaries);
  };

  const int threads = std::max(1, std::min<int>(spec.threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= jobs.size()) return;
          run_job(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  bool failed = false;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (const auto& e : job_errors[i]) {
      char prefix[64];
      std::snprintf(prefix, sizeof prefix, "[%s seed %llu] ",
                    strategy_name(jobs[i].strategy),
                    static_cast<unsigned long long>(jobs[i].seed));
      errors.push_back(prefix + e);
      failed = true;
    }
  }
  if (failed) return std::nullopt;
  return cells;
}

}  // namespace minuet
