// C API implementation: thin handle/status wrappers over the C++ core.
#include "minuet.h"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "artifacts.hpp"
#include "scenario.hpp"

using nlohmann::json;

struct minuet_scenario {
  minuet::ResolvedScenario resolved;
};

struct minuet_run {
  minuet::ResolvedScenario resolved;
  minuet::RunResult result;
};

namespace {

void set_err(char* errbuf, size_t errbuf_len, const std::string& msg) {
  if (!errbuf || errbuf_len == 0) return;
  const size_t n = msg.size() < errbuf_len - 1 ? msg.size() : errbuf_len - 1;
  std::memcpy(errbuf, msg.data(), n);
  errbuf[n] = '\0';
}

void set_errs(char* errbuf, size_t errbuf_len, const std::vector<std::string>& msgs) {
  std::string joined;
  for (size_t i = 0; i < msgs.size(); ++i) {
    if (i) joined += "; ";
    joined += msgs[i];
  }
  set_err(errbuf, errbuf_len, joined);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

minuet::SummaryOptions to_options(const minuet_options* opts) {
  minuet::SummaryOptions o;
  if (opts) {
    o.literal_group_denominator = opts->literal_group_denominator != 0;
    o.per_unique_delay = opts->per_unique_delay != 0;
  }
  return o;
}

json events_json(const std::vector<minuet::MetricSummary>& summaries) {
  json arr = json::array();
  for (const auto& s : summaries) {
    json e;
    e["event"] = s.event;
    e["kind"] = minuet::event_kind_name(s.kind);
    e["t_start_s"] = s.t_start_s;
    e["t_end_s"] = s.t_end_s;
    e["announcements"] = s.ap_g;
    e["clustering_packets"] = s.cp_g;
    e["monitoring_packets"] = s.mp_g;
    e["receipts"] = s.redundancy.total;
    e["single_receipts"] = s.redundancy.single;
    e["redundant_receipts"] = s.redundancy.redundant;
    e["single_ratio"] =
        s.redundancy.total ? json(s.redundancy.single_ratio) : json(nullptr);
    e["redundant_ratio"] =
        s.redundancy.total ? json(s.redundancy.redundant_ratio) : json(nullptr);
    e["avg_delay_s"] = s.d_avg_s ? json(*s.d_avg_s) : json(nullptr);
    e["clustering_overhead"] = s.c_ratio ? json(*s.c_ratio) : json(nullptr);
    e["grouped_ratio"] = s.g_ratio ? json(*s.g_ratio) : json(nullptr);
    e["groups_formed"] = s.f_groups;
    e["monitored_share"] = s.monitored_share;
    e["delivery_share"] = s.delivery_share;
    arr.push_back(std::move(e));
  }
  return arr;
}

// Fallible entry-point body wrapper: turns escapes into MINUET_ERR_INTERNAL.
template <typename Fn>
minuet_status guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    set_err(errbuf, errbuf_len, std::string("internal error: ") + e.what());
    return MINUET_ERR_INTERNAL;
  } catch (...) {
    set_err(errbuf, errbuf_len, "internal error");
    return MINUET_ERR_INTERNAL;
  }
}

minuet_status resolve_into(const json& doc, minuet_scenario** out, char* errbuf,
                           size_t errbuf_len) {
  std::vector<std::string> errors;
  auto resolved = minuet::resolve_scenario(doc, "", errors);
  if (!resolved) {
    set_errs(errbuf, errbuf_len, errors);
    return MINUET_ERR_VALIDATION;
  }
  *out = new minuet_scenario{std::move(*resolved)};
  return MINUET_OK;
}

bool split_csv(const char* text, std::vector<std::string>& out) {
  if (!text) return false;
  std::string cur;
  for (const char* p = text;; ++p) {
    if (*p == ',' || *p == '\0') {
      if (cur.empty()) return false;
      out.push_back(cur);
      cur.clear();
      if (*p == '\0') break;
    } else {
      cur += *p;
    }
  }
  return !out.empty();
}

}  // namespace

extern "C" {

const char* minuet_version(void) {
  static const std::string v = minuet::library_version();
  return v.c_str();
}

const char* minuet_status_name(minuet_status status) {
  switch (status) {
    case MINUET_OK: return "ok";
    case MINUET_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MINUET_ERR_PARSE: return "parse_error";
    case MINUET_ERR_VALIDATION: return "validation_error";
    case MINUET_ERR_UNKNOWN_NAME: return "unknown_name";
    case MINUET_ERR_IO: return "io_error";
    case MINUET_ERR_INTERNAL: return "internal_error";
  }
  return "unknown_status";
}

const char* minuet_builtin_scenarios(void) {
  static const std::string names = [] {
    std::string joined;
    for (const auto& n : minuet::builtin_scenario_names()) {
      if (!joined.empty()) joined += '\n';
      joined += n;
    }
    return joined;
  }();
  return names.c_str();
}

minuet_status minuet_scenario_from_file(const char* path, minuet_scenario** out,
                                        char* errbuf, size_t errbuf_len) {
  if (!path || !out) {
    set_err(errbuf, errbuf_len, "path and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    std::vector<std::string> errors;
    auto doc = minuet::load_scenario_json(path, errors);
    if (!doc) {
      set_errs(errbuf, errbuf_len, errors);
      const bool io = !errors.empty() && errors.front().rfind("cannot open", 0) == 0;
      return io ? MINUET_ERR_IO : MINUET_ERR_PARSE;
    }
    // Resolve trace_file references relative to the scenario file.
    std::string base_dir;
    const std::string p = path;
    const auto slash = p.find_last_of('/');
    if (slash != std::string::npos) base_dir = p.substr(0, slash);
    auto resolved = minuet::resolve_scenario(*doc, base_dir, errors);
    if (!resolved) {
      set_errs(errbuf, errbuf_len, errors);
      return MINUET_ERR_VALIDATION;
    }
    *out = new minuet_scenario{std::move(*resolved)};
    return MINUET_OK;
  });
}

minuet_status minuet_scenario_from_json(const char* json_text, minuet_scenario** out,
                                        char* errbuf, size_t errbuf_len) {
  if (!json_text || !out) {
    set_err(errbuf, errbuf_len, "json_text and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) {
      set_err(errbuf, errbuf_len, "invalid JSON");
      return MINUET_ERR_PARSE;
    }
    return resolve_into(doc, out, errbuf, errbuf_len);
  });
}

minuet_status minuet_scenario_builtin(const char* name, minuet_scenario** out,
                                      char* errbuf, size_t errbuf_len) {
  if (!name || !out) {
    set_err(errbuf, errbuf_len, "name and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    auto doc = minuet::builtin_scenario(name);
    if (!doc) {
      set_err(errbuf, errbuf_len,
              std::string("no built-in scenario named \"") + name + "\"");
      return MINUET_ERR_UNKNOWN_NAME;
    }
    return resolve_into(*doc, out, errbuf, errbuf_len);
  });
}

minuet_status minuet_scenario_set_seed(minuet_scenario* sc, uint64_t seed,
                                       char* errbuf, size_t errbuf_len) {
  if (!sc) {
    set_err(errbuf, errbuf_len, "scenario handle must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    json doc = sc->resolved.canonical;
    minuet::override_seed(doc, seed);
    std::vector<std::string> errors;
    auto resolved = minuet::resolve_scenario(doc, "", errors);
    if (!resolved) {
      set_errs(errbuf, errbuf_len, errors);
      return MINUET_ERR_VALIDATION;
    }
    sc->resolved = std::move(*resolved);
    return MINUET_OK;
  });
}

minuet_status minuet_scenario_set_strategy(minuet_scenario* sc, const char* strategy,
                                           char* errbuf, size_t errbuf_len) {
  if (!sc || !strategy) {
    set_err(errbuf, errbuf_len, "scenario handle and strategy must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    auto kind = minuet::parse_strategy(strategy);
    if (!kind) {
      set_err(errbuf, errbuf_len,
              std::string("no strategy named \"") + strategy + "\"");
      return MINUET_ERR_UNKNOWN_NAME;
    }
    json doc = sc->resolved.canonical;
    minuet::override_strategy(doc, *kind);
    std::vector<std::string> errors;
    auto resolved = minuet::resolve_scenario(doc, "", errors);
    if (!resolved) {
      set_errs(errbuf, errbuf_len, errors);
      return MINUET_ERR_VALIDATION;
    }
    sc->resolved = std::move(*resolved);
    return MINUET_OK;
  });
}

const char* minuet_scenario_name(const minuet_scenario* sc) {
  return sc ? sc->resolved.scenario.name.c_str() : nullptr;
}

const char* minuet_scenario_hash(const minuet_scenario* sc) {
  return sc ? sc->resolved.hash.c_str() : nullptr;
}

minuet_status minuet_scenario_canonical_json(const minuet_scenario* sc, char** out,
                                             char* errbuf, size_t errbuf_len) {
  if (!sc || !out) {
    set_err(errbuf, errbuf_len, "scenario handle and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    *out = dup_string(sc->resolved.canonical.dump(2) + "\n");
    if (!*out) {
      set_err(errbuf, errbuf_len, "out of memory");
      return MINUET_ERR_INTERNAL;
    }
    return MINUET_OK;
  });
}

void minuet_scenario_free(minuet_scenario* sc) { delete sc; }

minuet_status minuet_simulate(const minuet_scenario* sc, const minuet_options* opts,
                              minuet_run** out, char* errbuf, size_t errbuf_len) {
  if (!sc || !out) {
    set_err(errbuf, errbuf_len, "scenario handle and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    auto run = std::make_unique<minuet_run>();
    run->resolved = sc->resolved;
    run->result = minuet::execute_run(sc->resolved.scenario, to_options(opts));
    *out = run.release();
    return MINUET_OK;
  });
}

minuet_status minuet_run_summary_json(const minuet_run* run, char** out,
                                      char* errbuf, size_t errbuf_len) {
  if (!run || !out) {
    set_err(errbuf, errbuf_len, "run handle and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    const minuet::SimLog& log = run->result.log;
    json j;
    j["scenario"] = log.scenario;
    j["scenario_hash"] = run->resolved.hash;
    j["strategy"] = log.strategy;
    j["seed"] = log.seed;
    j["tick_s"] = log.tick_s;
    j["duration_s"] = log.duration_s;
    j["version"] = minuet::library_version();
    j["events"] = events_json(run->result.summaries);
    *out = dup_string(j.dump(2) + "\n");
    if (!*out) {
      set_err(errbuf, errbuf_len, "out of memory");
      return MINUET_ERR_INTERNAL;
    }
    return MINUET_OK;
  });
}

minuet_status minuet_run_log_text(const minuet_run* run, char** out, char* errbuf,
                                  size_t errbuf_len) {
  if (!run || !out) {
    set_err(errbuf, errbuf_len, "run handle and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    *out = dup_string(minuet::serialize_to_string(run->result.log));
    if (!*out) {
      set_err(errbuf, errbuf_len, "out of memory");
      return MINUET_ERR_INTERNAL;
    }
    return MINUET_OK;
  });
}

minuet_status minuet_run_write_artifacts(const minuet_run* run, const char* out_dir,
                                         char* errbuf, size_t errbuf_len) {
  if (!run || !out_dir) {
    set_err(errbuf, errbuf_len, "run handle and out_dir must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    std::vector<std::string> errors;
    if (!minuet::write_artifacts(out_dir, run->resolved, run->result, errors)) {
      set_errs(errbuf, errbuf_len, errors);
      return MINUET_ERR_IO;
    }
    return MINUET_OK;
  });
}

void minuet_run_free(minuet_run* run) { delete run; }

minuet_status minuet_sweep_json(const minuet_scenario* sc, const char* strategies_csv,
                                const char* seeds_csv, int threads,
                                const minuet_options* opts, char** out,
                                char* errbuf, size_t errbuf_len) {
  if (!sc || !out) {
    set_err(errbuf, errbuf_len, "scenario handle and out must be non-NULL");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  if (threads < 1) {
    set_err(errbuf, errbuf_len, "threads must be >= 1");
    return MINUET_ERR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errbuf_len, [&]() -> minuet_status {
    std::vector<std::string> strategy_names;
    if (!split_csv(strategies_csv, strategy_names)) {
      set_err(errbuf, errbuf_len, "strategies_csv must be a non-empty list");
      return MINUET_ERR_INVALID_ARGUMENT;
    }
    minuet::SweepSpec spec;
    for (const auto& s : strategy_names) {
      auto kind = minuet::parse_strategy(s);
      if (!kind) {
        set_err(errbuf, errbuf_len, "no strategy named \"" + s + "\"");
        return MINUET_ERR_UNKNOWN_NAME;
      }
      spec.strategies.push_back(*kind);
    }
    std::vector<std::string> seed_names;
    if (!split_csv(seeds_csv, seed_names)) {
      set_err(errbuf, errbuf_len, "seeds_csv must be a non-empty list");
      return MINUET_ERR_INVALID_ARGUMENT;
    }
    for (const auto& s : seed_names) {
      char* end = nullptr;
      errno = 0;
      const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
      if (errno != 0 || !end || *end != '\0' || s.empty()) {
        set_err(errbuf, errbuf_len, "bad seed \"" + s + "\"");
        return MINUET_ERR_INVALID_ARGUMENT;
      }
      spec.seeds.push_back(v);
    }
    spec.base_doc = sc->resolved.canonical;
    spec.opts = to_options(opts);
    spec.threads = threads;

    std::vector<std::string> errors;
    auto cells = minuet::run_sweep(spec, errors);
    if (!cells) {
      set_errs(errbuf, errbuf_len, errors);
      return MINUET_ERR_VALIDATION;
    }
    json j;
    j["scenario"] = sc->resolved.scenario.name;
    j["version"] = minuet::library_version();
    j["cells"] = json::array();
    for (const auto& c : *cells) {
      json cj;
      cj["strategy"] = minuet::strategy_name(c.strategy);
      cj["seed"] = c.seed;
      cj["scenario_hash"] = c.scenario_hash;
      cj["log_digest"] = c.log_digest;
      cj["log_bytes"] = c.log_bytes;
      cj["events"] = events_json(c.summaries);
      j["cells"].push_back(std::move(cj));
    }
    *out = dup_string(j.dump(2) + "\n");
    if (!*out) {
      set_err(errbuf, errbuf_len, "out of memory");
      return MINUET_ERR_INTERNAL;
    }
    return MINUET_OK;
  });
}

void minuet_string_free(char* s) { std::free(s); }

}  // extern "C"
