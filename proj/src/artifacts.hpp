// Run orchestration and on-disk artifacts: CSV series, summaries, manifests.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "metrics.hpp"
#include "scenario.hpp"
#include "simlog.hpp"

namespace minuet {

struct RunResult {
  SimLog log;
  std::vector<MetricSeries> series;      // one per event, event-id order
  std::vector<MetricSummary> summaries;  // one per event, event-id order
};

// Simulates the scenario to completion and computes every metric.
RunResult execute_run(const Scenario& scenario, const SummaryOptions& opts = {});

// Fixed-point decimal formatting used for every floating value we write, so
// artifacts are byte-stable across runs and platforms.
std::string format_fixed(double value, int decimals);

// CSV/str renderers (pure; no I/O).
std::string render_series_csv(const SimLog& log, const std::vector<std::uint32_t>& values);
std::string render_summary_csv(const std::vector<MetricSummary>& summaries);
std::string render_summary_text(const SimLog& log,
                                const std::vector<MetricSummary>& summaries);

// Writes simlog, per-event metric series CSVs, summary CSV/text and a JSON
// manifest into out_dir (created if missing). File names start with
// "<scenario>_<strategy>_". Returns the manifest on success.
std::optional<nlohmann::json> write_artifacts(const std::string& out_dir,
                                              const ResolvedScenario& resolved,
                                              const RunResult& result,
                                              std::vector<std::string>& errors);

// One (strategy, seed) cell of a sweep. The serialized log is digested, not
// stored, so sweeps over large scenarios stay cheap to hold.
struct SweepCell {
  StrategyKind strategy = StrategyKind::dca_like;
  std::uint64_t seed = 0;
  std::string scenario_hash;
  std::string log_digest;  // fnv1a over the serialized log
  std::size_t log_bytes = 0;
  std::vector<MetricSummary> summaries;
};

struct SweepSpec {
  nlohmann::json base_doc;
  std::vector<StrategyKind> strategies;
  std::vector<std::uint64_t> seeds;
  SummaryOptions opts;
  int threads = 1;
};

// Runs every strategy x seed combination, farming cells out to `threads`
// workers. Cell order is strategies-major, seeds-minor regardless of thread
// count, and every cell's content is independent of scheduling. On any
// resolution failure returns nullopt with messages in errors.
std::optional<std::vector<SweepCell>> run_sweep(const SweepSpec& spec,
                                                std::vector<std::string>& errors);

std::string library_version();

}  // namespace minuet
