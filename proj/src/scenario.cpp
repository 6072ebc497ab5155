#include "scenario.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace minuet {
namespace {

using nlohmann::json;

void add_err(std::vector<std::string>& errors, const std::string& path,
             const std::string& msg) {
  errors.push_back(path + ": " + msg);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

bool check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed,
                std::vector<std::string>& errors) {
  bool ok = true;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      add_err(errors, path + "." + it.key(), "unknown key");
      ok = false;
    }
  }
  return ok;
}

std::optional<double> as_number(const json& v, const std::string& path,
                                std::vector<std::string>& errors) {
  if (!v.is_number()) {
    add_err(errors, path, "must be a number");
    return std::nullopt;
  }
  return v.get<double>();
}

std::optional<int64_t> as_int(const json& v, const std::string& path,
                              std::vector<std::string>& errors) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    add_err(errors, path, "must be an integer");
    return std::nullopt;
  }
  return v.get<int64_t>();
}

std::optional<uint64_t> as_uint(const json& v, const std::string& path,
                                std::vector<std::string>& errors) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0)
    return static_cast<uint64_t>(v.get<int64_t>());
  add_err(errors, path, "must be a non-negative integer");
  return std::nullopt;
}

std::optional<std::string> as_string(const json& v, const std::string& path,
                                     std::vector<std::string>& errors) {
  if (!v.is_string()) {
    add_err(errors, path, "must be a string");
    return std::nullopt;
  }
  return v.get<std::string>();
}

std::optional<Position> as_xy(const json& v, const std::string& path,
                              std::vector<std::string>& errors) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    add_err(errors, path, "must be a [x, y] pair of numbers");
    return std::nullopt;
  }
  return Position{v[0].get<double>(), v[1].get<double>()};
}

struct Waypoint {
  double t = 0;
  Position pos;
};

std::optional<Waypoint> as_waypoint(const json& v, const std::string& path,
                                    std::vector<std::string>& errors) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    add_err(errors, path, "must be a [t, x, y] triple of numbers");
    return std::nullopt;
  }
  return Waypoint{v[0].get<double>(), {v[1].get<double>(), v[2].get<double>()}};
}

// Identifiers end up in log records and file names, so keep them to a safe set.
bool valid_token(const std::string& s) {
  if (s.empty() || s.size() > 64) return false;
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '_' && c != '-') return false;
  }
  return true;
}

// True when value is (within tolerance) an integer multiple of unit; the
// rounded multiple is stored in out.
bool integer_multiple(double value, double unit, int64_t& out) {
  const double q = value / unit;
  out = std::llround(q);
  return std::fabs(q - static_cast<double>(out)) <= 1e-6 * std::max(1.0, std::fabs(q));
}

double normalize_heading(double h) {
  const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
  while (h < 0) h += two_pi;
  while (h >= two_pi) h -= two_pi;
  return h;
}

}  // namespace

std::optional<nlohmann::json> load_scenario_json(const std::string& path,
                                                 std::vector<std::string>& errors) {
  std::ifstream f(path);
  if (!f) {
    errors.push_back("cannot open scenario file: " + path);
    return std::nullopt;
  }
  try {
    json j;
    f >> j;
    return j;
  } catch (const json::parse_error& e) {
    errors.push_back("invalid JSON in " + path + ": " + e.what());
    return std::nullopt;
  }
}

void override_seed(nlohmann::json& doc, uint64_t seed) { doc["seed"] = seed; }

void override_strategy(nlohmann::json& doc, StrategyKind strategy) {
  doc["strategy"] = strategy_name(strategy);
}

void override_name(nlohmann::json& doc, const std::string& name) { doc["name"] = name; }

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::optional<ResolvedScenario> resolve_scenario(const nlohmann::json& doc,
                                                 const std::string& base_dir,
                                                 std::vector<std::string>& errors) {
  const size_t initial_errors = errors.size();
  if (!doc.is_object()) {
    add_err(errors, "$", "scenario document must be a JSON object");
    return std::nullopt;
  }
  json canon = doc;
  check_keys(doc, "$",
             {"name", "duration_s", "tick_s", "seed", "v2v_range_m",
              "detection_range_m", "loss_probability", "hop_latency_s", "t_max_s",
              "announce_interval_s", "monitor_rate_pps", "payload_bytes", "strategy",
              "maintenance_interval_s", "grace_intervals", "bounds", "mobility",
              "events", "base_stations"},
             errors);

  Scenario sc;

  // --- scalar settings, with defaults -------------------------------------
  sc.name = "scenario";
  if (const json* v = find(doc, "name")) {
    if (auto s = as_string(*v, "$.name", errors)) {
      if (!valid_token(*s))
        add_err(errors, "$.name", "must be 1-64 chars from [A-Za-z0-9_-]");
      else
        sc.name = *s;
    }
  }
  canon["name"] = sc.name;

  sc.duration_s = 0;
  if (const json* v = find(doc, "duration_s")) {
    if (auto d = as_number(*v, "$.duration_s", errors)) {
      if (*d <= 0)
        add_err(errors, "$.duration_s", "must be > 0");
      else
        sc.duration_s = *d;
    }
  } else {
    add_err(errors, "$.duration_s", "missing required key");
  }
  canon["duration_s"] = sc.duration_s;

  sc.tick_s = 0.1;
  if (const json* v = find(doc, "tick_s")) {
    if (auto d = as_number(*v, "$.tick_s", errors)) {
      if (*d <= 0 || *d > 1.0)
        add_err(errors, "$.tick_s", "must be in (0, 1]");
      else
        sc.tick_s = *d;
    }
  }
  canon["tick_s"] = sc.tick_s;

  sc.seed = 1;
  if (const json* v = find(doc, "seed")) {
    if (auto u = as_uint(*v, "$.seed", errors)) sc.seed = *u;
  }
  canon["seed"] = sc.seed;

  sc.radio = RadioConfig{};
  if (const json* v = find(doc, "v2v_range_m")) {
    if (auto d = as_number(*v, "$.v2v_range_m", errors)) {
      if (*d <= 0)
        add_err(errors, "$.v2v_range_m", "must be > 0");
      else
        sc.radio.v2v_range_m = *d;
    }
  }
  canon["v2v_range_m"] = sc.radio.v2v_range_m;

  if (const json* v = find(doc, "detection_range_m")) {
    if (auto d = as_number(*v, "$.detection_range_m", errors)) {
      if (*d <= 0)
        add_err(errors, "$.detection_range_m", "must be > 0");
      else
        sc.radio.detection_range_m = *d;
    }
  }
  canon["detection_range_m"] = sc.radio.detection_range_m;

  if (const json* v = find(doc, "loss_probability")) {
    if (auto d = as_number(*v, "$.loss_probability", errors)) {
      if (*d < 0 || *d > 1)
        add_err(errors, "$.loss_probability", "must be in [0, 1]");
      else
        sc.radio.loss_probability = *d;
    }
  }
  canon["loss_probability"] = sc.radio.loss_probability;

  sc.radio.hop_latency_s = sc.tick_s;
  if (const json* v = find(doc, "hop_latency_s")) {
    if (auto d = as_number(*v, "$.hop_latency_s", errors)) sc.radio.hop_latency_s = *d;
  }
  {
    int64_t ticks = 0;
    if (!integer_multiple(sc.radio.hop_latency_s, sc.tick_s, ticks) || ticks < 1)
      add_err(errors, "$.hop_latency_s",
              "must be a whole number of ticks and at least one tick");
  }
  canon["hop_latency_s"] = sc.radio.hop_latency_s;

  sc.protocol = ProtocolConfig{};
  if (const json* v = find(doc, "t_max_s")) {
    if (auto d = as_number(*v, "$.t_max_s", errors)) {
      if (*d <= 0)
        add_err(errors, "$.t_max_s", "must be > 0");
      else
        sc.protocol.t_max_s = *d;
    }
  }
  {
    int64_t ticks = 0;
    if (!integer_multiple(sc.protocol.t_max_s, sc.tick_s, ticks) || ticks < 1)
      add_err(errors, "$.t_max_s",
              "must be a whole number of ticks and at least one tick");
  }
  canon["t_max_s"] = sc.protocol.t_max_s;

  if (const json* v = find(doc, "announce_interval_s")) {
    if (auto d = as_number(*v, "$.announce_interval_s", errors)) {
      if (*d <= 0)
        add_err(errors, "$.announce_interval_s", "must be > 0");
      else
        sc.protocol.announce_interval_s = *d;
    }
  }
  {
    int64_t ticks = 0;
    if (!integer_multiple(sc.protocol.announce_interval_s, sc.tick_s, ticks) || ticks < 1)
      add_err(errors, "$.announce_interval_s",
              "must be a whole number of ticks and at least one tick");
  }
  canon["announce_interval_s"] = sc.protocol.announce_interval_s;

  if (const json* v = find(doc, "monitor_rate_pps")) {
    if (auto d = as_number(*v, "$.monitor_rate_pps", errors)) {
      if (*d <= 0)
        add_err(errors, "$.monitor_rate_pps", "must be > 0");
      else
        sc.protocol.monitor_rate_pps = *d;
    }
  }
  if (sc.protocol.monitor_rate_pps * sc.tick_s > 1.0 + 1e-9)
    add_err(errors, "$.monitor_rate_pps",
            "packet period must be at least one tick (rate * tick_s <= 1)");
  canon["monitor_rate_pps"] = sc.protocol.monitor_rate_pps;

  if (const json* v = find(doc, "payload_bytes")) {
    if (auto i = as_int(*v, "$.payload_bytes", errors)) {
      if (*i < 0 || *i > 1000000)
        add_err(errors, "$.payload_bytes", "must be in [0, 1000000]");
      else
        sc.protocol.payload_bytes = static_cast<int>(*i);
    }
  }
  canon["payload_bytes"] = sc.protocol.payload_bytes;

  sc.clustering = ClusteringConfig{};
  if (const json* v = find(doc, "strategy")) {
    if (auto s = as_string(*v, "$.strategy", errors)) {
      if (auto k = parse_strategy(*s))
        sc.clustering.strategy = *k;
      else
        add_err(errors, "$.strategy", "must be \"dca_like\" or \"pctt_like\"");
    }
  }
  canon["strategy"] = strategy_name(sc.clustering.strategy);

  if (const json* v = find(doc, "maintenance_interval_s")) {
    if (auto d = as_number(*v, "$.maintenance_interval_s", errors)) {
      if (*d <= 0)
        add_err(errors, "$.maintenance_interval_s", "must be > 0");
      else
        sc.clustering.maintenance_interval_s = *d;
    }
  }
  {
    int64_t ticks = 0;
    if (!integer_multiple(sc.clustering.maintenance_interval_s, sc.tick_s, ticks) ||
        ticks < 1)
      add_err(errors, "$.maintenance_interval_s",
              "must be a whole number of ticks and at least one tick");
  }
  canon["maintenance_interval_s"] = sc.clustering.maintenance_interval_s;

  if (const json* v = find(doc, "grace_intervals")) {
    if (auto i = as_int(*v, "$.grace_intervals", errors)) {
      if (*i < 0 || *i > 1000)
        add_err(errors, "$.grace_intervals", "must be in [0, 1000]");
      else
        sc.clustering.grace_intervals = static_cast<int>(*i);
    }
  }
  canon["grace_intervals"] = sc.clustering.grace_intervals;

  // --- bounds --------------------------------------------------------------
  bool bounds_ok = false;
  if (const json* v = find(doc, "bounds")) {
    if (!v->is_object()) {
      add_err(errors, "$.bounds", "must be an object");
    } else {
      check_keys(*v, "$.bounds", {"min_x", "min_y", "max_x", "max_y"}, errors);
      double vals[4] = {0, 0, 0, 0};
      const char* keys[4] = {"min_x", "min_y", "max_x", "max_y"};
      bool all = true;
      for (int i = 0; i < 4; ++i) {
        if (const json* f = find(*v, keys[i])) {
          if (auto d = as_number(*f, std::string("$.bounds.") + keys[i], errors))
            vals[i] = *d;
          else
            all = false;
        } else {
          add_err(errors, std::string("$.bounds.") + keys[i], "missing required key");
          all = false;
        }
      }
      if (all) {
        sc.bounds = Bounds{vals[0], vals[1], vals[2], vals[3]};
        if (sc.bounds.width() <= 0 || sc.bounds.height() <= 0)
          add_err(errors, "$.bounds", "max_x/max_y must exceed min_x/min_y");
        else
          bounds_ok = true;
      }
    }
  } else {
    add_err(errors, "$.bounds", "missing required key");
  }

  // --- events ----------------------------------------------------------------
  if (const json* v = find(doc, "events")) {
    if (!v->is_array() || v->empty()) {
      add_err(errors, "$.events", "must be a non-empty array");
    } else {
      std::set<std::string> seen_ids;
      for (size_t i = 0; i < v->size(); ++i) {
        const std::string path = "$.events[" + std::to_string(i) + "]";
        const json& e = (*v)[i];
        if (!e.is_object()) {
          add_err(errors, path, "must be an object");
          continue;
        }
        check_keys(e, path, {"id", "kind", "t_start_s", "t_end_s", "position", "waypoints"},
                   errors);
        EventSpec spec;
        if (const json* f = find(e, "id")) {
          if (auto s = as_string(*f, path + ".id", errors)) {
            if (!valid_token(*s))
              add_err(errors, path + ".id", "must be 1-64 chars from [A-Za-z0-9_-]");
            else if (!seen_ids.insert(*s).second)
              add_err(errors, path + ".id", "duplicate event id \"" + *s + "\"");
            else
              spec.id = *s;
          }
        } else {
          add_err(errors, path + ".id", "missing required key");
        }
        bool kind_ok = false;
        if (const json* f = find(e, "kind")) {
          if (auto s = as_string(*f, path + ".kind", errors)) {
            if (auto k = parse_event_kind(*s)) {
              spec.kind = *k;
              kind_ok = true;
            } else {
              add_err(errors, path + ".kind", "must be \"fixed\" or \"mobile\"");
            }
          }
        } else {
          add_err(errors, path + ".kind", "missing required key");
        }
        bool window_ok = false;
        if (const json* f = find(e, "t_start_s")) {
          if (auto d = as_number(*f, path + ".t_start_s", errors)) spec.t_start_s = *d;
        } else {
          add_err(errors, path + ".t_start_s", "missing required key");
        }
        if (const json* f = find(e, "t_end_s")) {
          if (auto d = as_number(*f, path + ".t_end_s", errors)) spec.t_end_s = *d;
        } else {
          add_err(errors, path + ".t_end_s", "missing required key");
        }
        if (spec.t_start_s < 0) {
          add_err(errors, path + ".t_start_s", "must be >= 0");
        } else if (spec.t_end_s <= spec.t_start_s) {
          add_err(errors, path + ".t_end_s", "must be > t_start_s");
        } else if (sc.duration_s > 0 && spec.t_end_s > sc.duration_s + 1e-9) {
          add_err(errors, path + ".t_end_s", "must be <= duration_s");
        } else {
          window_ok = true;
        }
        if (kind_ok && spec.kind == EventKind::fixed) {
          if (find(e, "waypoints"))
            add_err(errors, path + ".waypoints", "not allowed for fixed events");
          if (const json* f = find(e, "position")) {
            if (auto p = as_xy(*f, path + ".position", errors)) {
              if (bounds_ok && !sc.bounds.contains(*p))
                add_err(errors, path + ".position", "outside bounds");
              spec.waypoints.push_back({spec.t_start_s, *p});
            }
          } else {
            add_err(errors, path + ".position", "missing required key");
          }
        } else if (kind_ok && spec.kind == EventKind::mobile) {
          if (find(e, "position"))
            add_err(errors, path + ".position", "not allowed for mobile events");
          if (const json* f = find(e, "waypoints")) {
            if (!f->is_array() || f->size() < 2) {
              add_err(errors, path + ".waypoints", "must be an array of at least 2 entries");
            } else {
              bool wps_ok = true;
              for (size_t w = 0; w < f->size(); ++w) {
                const std::string wpath = path + ".waypoints[" + std::to_string(w) + "]";
                if (auto wp = as_waypoint((*f)[w], wpath, errors)) {
                  if (!spec.waypoints.empty() && wp->t <= spec.waypoints.back().t_s) {
                    add_err(errors, wpath, "times must be strictly increasing");
                    wps_ok = false;
                  }
                  if (bounds_ok && !sc.bounds.contains(wp->pos)) {
                    add_err(errors, wpath, "outside bounds");
                    wps_ok = false;
                  }
                  spec.waypoints.push_back({wp->t, wp->pos});
                } else {
                  wps_ok = false;
                }
              }
              if (wps_ok && window_ok) {
                if (spec.waypoints.front().t_s < spec.t_start_s - 1e-9)
                  add_err(errors, path + ".waypoints", "first time must be >= t_start_s");
                if (spec.waypoints.back().t_s > spec.t_end_s + 1e-9)
                  add_err(errors, path + ".waypoints", "last time must be <= t_end_s");
              }
            }
          } else {
            add_err(errors, path + ".waypoints", "missing required key");
          }
        }
        if (!spec.id.empty()) sc.events.push_back(std::move(spec));
      }
      std::sort(sc.events.begin(), sc.events.end(),
                [](const EventSpec& a, const EventSpec& b) { return id_less(a.id, b.id); });
    }
  } else {
    add_err(errors, "$.events", "missing required key");
  }

  // --- base stations -----------------------------------------------------
  if (const json* v = find(doc, "base_stations")) {
    if (!v->is_object()) {
      add_err(errors, "$.base_stations", "must be an object");
    } else {
      check_keys(*v, "$.base_stations", {"grid", "list"}, errors);
      const json* grid = find(*v, "grid");
      const json* list = find(*v, "list");
      if ((grid != nullptr) == (list != nullptr)) {
        add_err(errors, "$.base_stations", "exactly one of grid, list required");
      } else if (grid) {
        if (!grid->is_object()) {
          add_err(errors, "$.base_stations.grid", "must be an object");
        } else {
          check_keys(*grid, "$.base_stations.grid", {"count", "range_m"}, errors);
          int64_t count = 0;
          if (const json* f = find(*grid, "count")) {
            if (auto i = as_int(*f, "$.base_stations.grid.count", errors)) {
              if (*i < 1 || *i > 10000)
                add_err(errors, "$.base_stations.grid.count", "must be in [1, 10000]");
              else
                count = *i;
            }
          } else {
            add_err(errors, "$.base_stations.grid.count", "missing required key");
          }
          double range = 0;
          bool range_given = false;
          if (const json* f = find(*grid, "range_m")) {
            if (auto d = as_number(*f, "$.base_stations.grid.range_m", errors)) {
              if (*d <= 0)
                add_err(errors, "$.base_stations.grid.range_m", "must be > 0");
              else {
                range = *d;
                range_given = true;
              }
            }
          }
          if (count > 0 && bounds_ok) {
            const double w = sc.bounds.width();
            const double h = sc.bounds.height();
            int cols = std::max(
                1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count) * w / h))));
            int rows = static_cast<int>((count + cols - 1) / cols);
            const double cell_w = w / cols;
            const double cell_h = h / rows;
            // Stations left unsized cover their whole grid cell.
            if (!range_given) range = std::hypot(cell_w, cell_h) / 2.0;
            const int width_digits = static_cast<int>(std::to_string(count).size());
            for (int64_t idx = 0; idx < count; ++idx) {
              const int i = static_cast<int>(idx % cols);
              const int j = static_cast<int>(idx / cols);
              char id[32];
              std::snprintf(id, sizeof id, "bs%0*d", width_digits,
                            static_cast<int>(idx + 1));
              BaseStation bs;
              bs.id = id;
              bs.pos = {sc.bounds.min_x + (i + 0.5) * cell_w,
                        sc.bounds.min_y + (j + 0.5) * cell_h};
              bs.range_m = range;
              sc.stations.push_back(std::move(bs));
            }
            canon["base_stations"]["grid"]["range_m"] = range;
          }
        }
      } else {
        if (!list->is_array() || list->empty()) {
          add_err(errors, "$.base_stations.list", "must be a non-empty array");
        } else {
          std::set<std::string> seen_ids;
          for (size_t i = 0; i < list->size(); ++i) {
            const std::string path = "$.base_stations.list[" + std::to_string(i) + "]";
            const json& s = (*list)[i];
            if (!s.is_object()) {
              add_err(errors, path, "must be an object");
              continue;
            }
            check_keys(s, path, {"id", "position", "range_m"}, errors);
            BaseStation bs;
            if (const json* f = find(s, "id")) {
              if (auto str = as_string(*f, path + ".id", errors)) {
                if (!valid_token(*str))
                  add_err(errors, path + ".id", "must be 1-64 chars from [A-Za-z0-9_-]");
                else if (!seen_ids.insert(*str).second)
                  add_err(errors, path + ".id", "duplicate station id \"" + *str + "\"");
                else
                  bs.id = *str;
              }
            } else {
              add_err(errors, path + ".id", "missing required key");
            }
            if (const json* f = find(s, "position")) {
              if (auto p = as_xy(*f, path + ".position", errors)) {
                if (bounds_ok && !sc.bounds.contains(*p))
                  add_err(errors, path + ".position", "outside bounds");
                bs.pos = *p;
              }
            } else {
              add_err(errors, path + ".position", "missing required key");
            }
            if (const json* f = find(s, "range_m")) {
              if (auto d = as_number(*f, path + ".range_m", errors)) {
                if (*d <= 0)
                  add_err(errors, path + ".range_m", "must be > 0");
                else
                  bs.range_m = *d;
              }
            } else {
              add_err(errors, path + ".range_m", "missing required key");
            }
            if (!bs.id.empty()) sc.stations.push_back(std::move(bs));
          }
          std::sort(sc.stations.begin(), sc.stations.end(),
                    [](const BaseStation& a, const BaseStation& b) {
                      return id_less(a.id, b.id);
                    });
        }
      }
    }
  } else {
    add_err(errors, "$.base_stations", "missing required key");
  }

  // --- mobility ---------------------------------------------------------
  if (const json* v = find(doc, "mobility")) {
    if (!v->is_object()) {
      add_err(errors, "$.mobility", "must be an object");
    } else {
      check_keys(*v, "$.mobility", {"trace_file", "flows", "vehicles"}, errors);
      const json* trace_file = find(*v, "trace_file");
      const json* flows = find(*v, "flows");
      const json* vehicles = find(*v, "vehicles");
      const int sources =
          (trace_file ? 1 : 0) + (flows ? 1 : 0) + (vehicles ? 1 : 0);
      if (sources != 1) {
        add_err(errors, "$.mobility",
                "exactly one of trace_file, flows, vehicles required");
      } else if (trace_file) {
        if (auto s = as_string(*trace_file, "$.mobility.trace_file", errors)) {
          std::string path = *s;
          if (!base_dir.empty() && !path.empty() && path[0] != '/')
            path = base_dir + "/" + path;
          std::vector<std::string> terrs;
          auto traces = load_traces_file(path, terrs);
          if (!traces) {
            for (const auto& te : terrs)
              add_err(errors, "$.mobility.trace_file", te);
            if (terrs.empty())
              add_err(errors, "$.mobility.trace_file", "cannot load " + path);
          } else {
            sc.traces = std::move(*traces);
            if (sc.traces.empty())
              add_err(errors, "$.mobility.trace_file", "no vehicles in " + path);
          }
        }
      } else if (flows) {
        if (!flows->is_array() || flows->empty()) {
          add_err(errors, "$.mobility.flows", "must be a non-empty array");
        } else {
          std::vector<FlowSpec> specs;
          bool flows_ok = true;
          for (size_t i = 0; i < flows->size(); ++i) {
            const std::string path = "$.mobility.flows[" + std::to_string(i) + "]";
            const json& fj = (*flows)[i];
            if (!fj.is_object()) {
              add_err(errors, path, "must be an object");
              flows_ok = false;
              continue;
            }
            check_keys(fj, path,
                       {"from", "to", "rate_per_s", "speed_mps", "speed_jitter_mps"},
                       errors);
            FlowSpec fs;
            bool ok = true;
            if (const json* f = find(fj, "from")) {
              if (auto p = as_xy(*f, path + ".from", errors)) {
                if (bounds_ok && !sc.bounds.contains(*p)) {
                  add_err(errors, path + ".from", "outside bounds");
                  ok = false;
                }
                fs.from = *p;
              } else {
                ok = false;
              }
            } else {
              add_err(errors, path + ".from", "missing required key");
              ok = false;
            }
            if (const json* f = find(fj, "to")) {
              if (auto p = as_xy(*f, path + ".to", errors)) {
                if (bounds_ok && !sc.bounds.contains(*p)) {
                  add_err(errors, path + ".to", "outside bounds");
                  ok = false;
                }
                fs.to = *p;
              } else {
                ok = false;
              }
            } else {
              add_err(errors, path + ".to", "missing required key");
              ok = false;
            }
            if (ok && distance(fs.from, fs.to) < 1e-9) {
              add_err(errors, path, "from and to must differ");
              ok = false;
            }
            if (const json* f = find(fj, "rate_per_s")) {
              if (auto d = as_number(*f, path + ".rate_per_s", errors)) {
                if (*d <= 0) {
                  add_err(errors, path + ".rate_per_s", "must be > 0");
                  ok = false;
                } else {
                  fs.rate_per_s = *d;
                }
              } else {
                ok = false;
              }
            } else {
              add_err(errors, path + ".rate_per_s", "missing required key");
              ok = false;
            }
            if (const json* f = find(fj, "speed_mps")) {
              if (auto d = as_number(*f, path + ".speed_mps", errors)) {
                if (*d <= 0) {
                  add_err(errors, path + ".speed_mps", "must be > 0");
                  ok = false;
                } else {
                  fs.speed_mps = *d;
                }
              } else {
                ok = false;
              }
            } else {
              add_err(errors, path + ".speed_mps", "missing required key");
              ok = false;
            }
            fs.speed_jitter_mps = 0;
            if (const json* f = find(fj, "speed_jitter_mps")) {
              if (auto d = as_number(*f, path + ".speed_jitter_mps", errors)) {
                if (*d < 0) {
                  add_err(errors, path + ".speed_jitter_mps", "must be >= 0");
                  ok = false;
                } else {
                  fs.speed_jitter_mps = *d;
                }
              } else {
                ok = false;
              }
            }
            canon["mobility"]["flows"][i]["speed_jitter_mps"] = fs.speed_jitter_mps;
            flows_ok = flows_ok && ok;
            specs.push_back(fs);
          }
          if (flows_ok && sc.duration_s > 0)
            sc.traces = generate_flow_traces(specs, sc.duration_s, sc.seed);
        }
      } else {
        if (!vehicles->is_array() || vehicles->empty()) {
          add_err(errors, "$.mobility.vehicles", "must be a non-empty array");
        } else {
          std::set<std::string> seen_ids;
          for (size_t i = 0; i < vehicles->size(); ++i) {
            const std::string path = "$.mobility.vehicles[" + std::to_string(i) + "]";
            const json& vj = (*vehicles)[i];
            if (!vj.is_object()) {
              add_err(errors, path, "must be an object");
              continue;
            }
            check_keys(vj, path, {"id", "waypoints"}, errors);
            VehicleTrace tr;
            if (const json* f = find(vj, "id")) {
              if (auto s = as_string(*f, path + ".id", errors)) {
                if (!valid_token(*s))
                  add_err(errors, path + ".id", "must be 1-64 chars from [A-Za-z0-9_-]");
                else if (!seen_ids.insert(*s).second)
                  add_err(errors, path + ".id", "duplicate vehicle id \"" + *s + "\"");
                else
                  tr.id = *s;
              }
            } else {
              add_err(errors, path + ".id", "missing required key");
            }
            std::vector<Waypoint> wps;
            bool wps_ok = true;
            if (const json* f = find(vj, "waypoints")) {
              if (!f->is_array() || f->size() < 2) {
                add_err(errors, path + ".waypoints",
                        "must be an array of at least 2 entries");
                wps_ok = false;
              } else {
                for (size_t w = 0; w < f->size(); ++w) {
                  const std::string wpath =
                      path + ".waypoints[" + std::to_string(w) + "]";
                  if (auto wp = as_waypoint((*f)[w], wpath, errors)) {
                    if (wp->t < 0) {
                      add_err(errors, wpath, "time must be >= 0");
                      wps_ok = false;
                    }
                    if (!wps.empty() && wp->t <= wps.back().t) {
                      add_err(errors, wpath, "times must be strictly increasing");
                      wps_ok = false;
                    }
                    if (bounds_ok && !sc.bounds.contains(wp->pos)) {
                      add_err(errors, wpath, "outside bounds");
                      wps_ok = false;
                    }
                    wps.push_back(*wp);
                  } else {
                    wps_ok = false;
                  }
                }
              }
            } else {
              add_err(errors, path + ".waypoints", "missing required key");
              wps_ok = false;
            }
            if (wps_ok && !tr.id.empty()) {
              for (size_t w = 0; w < wps.size(); ++w) {
                TraceSample s;
                s.t_s = wps[w].t;
                s.pos = wps[w].pos;
                const size_t seg = (w + 1 < wps.size()) ? w : w - 1;
                const double dt = wps[seg + 1].t - wps[seg].t;
                const double dx = wps[seg + 1].pos.x - wps[seg].pos.x;
                const double dy = wps[seg + 1].pos.y - wps[seg].pos.y;
                s.speed_mps = std::hypot(dx, dy) / dt;
                s.heading_rad =
                    (dx == 0 && dy == 0) ? 0.0 : normalize_heading(std::atan2(dy, dx));
                tr.samples.push_back(s);
              }
              sc.traces.push_back(std::move(tr));
            }
          }
          std::sort(sc.traces.begin(), sc.traces.end(),
                    [](const VehicleTrace& a, const VehicleTrace& b) {
                      return id_less(a.id, b.id);
                    });
        }
      }
    }
  } else {
    add_err(errors, "$.mobility", "missing required key");
  }

  // Loaded trace files can place vehicles anywhere; verify containment.
  if (bounds_ok) {
    for (const auto& tr : sc.traces) {
      for (const auto& s : tr.samples) {
        if (!sc.bounds.contains(s.pos)) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "vehicle %s at t=%.3f is outside bounds (%.1f, %.1f)",
                        tr.id.c_str(), s.t_s, s.pos.x, s.pos.y);
          add_err(errors, "$.mobility", buf);
          break;
        }
      }
    }
  }

  if (errors.size() != initial_errors) return std::nullopt;

  ResolvedScenario out;
  out.scenario = std::move(sc);
  out.canonical = std::move(canon);
  out.hash = fnv1a_hex(out.canonical.dump());
  return out;
}

// --- built-in scenarios ----------------------------------------------------

namespace {

json wp(double t, double x, double y) { return json::array({t, x, y}); }
json xy(double x, double y) { return json::array({x, y}); }

json vehicle(const char* id, std::initializer_list<json> wps) {
  json v;
  v["id"] = id;
  v["waypoints"] = json::array();
  for (const auto& w : wps) v["waypoints"].push_back(w);
  return v;
}

json flow(double fx, double fy, double tx, double ty, double rate, double speed,
          double jitter) {
  json f;
  f["from"] = xy(fx, fy);
  f["to"] = xy(tx, ty);
  f["rate_per_s"] = rate;
  f["speed_mps"] = speed;
  f["speed_jitter_mps"] = jitter;
  return f;
}

json fixed_event(const char* id, double t0, double t1, double x, double y) {
  json e;
  e["id"] = id;
  e["kind"] = "fixed";
  e["t_start_s"] = t0;
  e["t_end_s"] = t1;
  e["position"] = xy(x, y);
  return e;
}

json mobile_event(const char* id, double t0, double t1,
                  std::initializer_list<json> wps) {
  json e;
  e["id"] = id;
  e["kind"] = "mobile";
  e["t_start_s"] = t0;
  e["t_end_s"] = t1;
  e["waypoints"] = json::array();
  for (const auto& w : wps) e["waypoints"].push_back(w);
  return e;
}

json station(const char* id, double x, double y, double range) {
  json s;
  s["id"] = id;
  s["position"] = xy(x, y);
  s["range_m"] = range;
  return s;
}

// Two-event urban grid used by the headline experiments. A light, fast
// east-west street hosts the fixed event inside a small coverage gap; a busy,
// slower corridor (east-west then south on a busy cross street) carries the
// mobile event, so the mobile event rides with dense co-moving traffic while
// the fixed event only sees brief passes.
json paper_doc(bool high_density) {
  const double mult = high_density ? 2.0 : 1.0;
  json d;
  d["name"] = high_density ? "paper_hd" : "paper_ld";
  d["duration_s"] = 360.0;
  d["t_max_s"] = 0.6;
  d["bounds"] = {{"min_x", 6400.0}, {"min_y", 4600.0}, {"max_x", 8950.0}, {"max_y", 7150.0}};
  json flows = json::array();
  // busy corridor: east-west street at y=6600 plus north-south street at x=8200
  flows.push_back(flow(6400, 6600, 8950, 6600, 0.25 * mult, 9, 1));
  flows.push_back(flow(8950, 6600, 6400, 6600, 0.0625 * mult, 9, 1));
  flows.push_back(flow(8200, 7150, 8200, 4600, 0.25 * mult, 9, 1));
  flows.push_back(flow(8200, 4600, 8200, 7150, 0.0625 * mult, 9, 1));
  // lighter fast streets: east-west at y=5878.2 (hosts the fixed event), north-south at x=7000
  flows.push_back(flow(6400, 5878.2, 8950, 5878.2, 0.04 * mult, 14, 1));
  flows.push_back(flow(8950, 5878.2, 6400, 5878.2, 0.04 * mult, 14, 1));
  flows.push_back(flow(7000, 7150, 7000, 4600, 0.025 * mult, 14, 1));
  flows.push_back(flow(7000, 4600, 7000, 7150, 0.025 * mult, 14, 1));
  // cross street passing 60 m east of the fixed event: its vehicles are near
  // that event's groups but never inside sensing range
  flows.push_back(flow(7742, 7150, 7742, 4600, 0.04 * mult, 9, 1));
  flows.push_back(flow(7742, 4600, 7742, 7150, 0.04 * mult, 9, 1));
  d["mobility"] = {{"flows", flows}};
  json events = json::array();
  events.push_back(fixed_event("ev_fixed", 30, 330, 7682, 5878.2));
  events.push_back(mobile_event("ev_mobile", 30, 330,
                                {wp(30, 6400, 6600), wp(230, 8200, 6600),
                                 wp(330, 8200, 5700)}));
  d["events"] = events;
  d["base_stations"] = {{"grid", {{"count", 26}, {"range_m", 200.0}}}};
  return d;
}

// Tiny straight-road scenario: five scripted vehicles, one fixed and one
// mobile event, two overlapping stations. Runs in well under a second.
json smoke_doc() {
  json d;
  d["name"] = "smoke";
  d["duration_s"] = 30.0;
  d["bounds"] = {{"min_x", -60.0}, {"min_y", -20.0}, {"max_x", 460.0}, {"max_y", 40.0}};
  json vehicles = json::array();
  vehicles.push_back(vehicle("v1", {wp(0, 0, 0), wp(30, 300, 0)}));
  vehicles.push_back(vehicle("v2", {wp(0, -40, 0), wp(30, 260, 0)}));
  vehicles.push_back(vehicle("v3", {wp(0, 150, 0), wp(30, 150, 0)}));
  vehicles.push_back(vehicle("v4", {wp(0, 350, 0), wp(30, 350, 0)}));
  vehicles.push_back(vehicle("v5", {wp(5, 400, 0), wp(25, 200, 0)}));
  d["mobility"] = {{"vehicles", vehicles}};
  json events = json::array();
  events.push_back(fixed_event("evf", 5, 25, 150, 0));
  events.push_back(mobile_event("evm", 5, 25, {wp(5, 50, 0), wp(25, 250, 0)}));
  d["events"] = events;
  json stations = json::array();
  stations.push_back(station("bs1", 100, 30, 120));
  stations.push_back(station("bs2", 300, 30, 120));
  d["base_stations"] = {{"list", stations}};
  return d;
}

// Five stationary vehicles in mutual radio range around one co-located fixed
// event: with the always-cooperate strategy this must form exactly one group.
json clique_doc() {
  json d;
  d["name"] = "clique";
  d["duration_s"] = 60.0;
  d["bounds"] = {{"min_x", 0.0}, {"min_y", 0.0}, {"max_x", 200.0}, {"max_y", 200.0}};
  json vehicles = json::array();
  const double cx = 100, cy = 100, r = 50;
  const char* ids[5] = {"c1", "c2", "c3", "c4", "c5"};
  for (int i = 0; i < 5; ++i) {
    const double a = 2.0 * 3.141592653589793238462643383279502884 * i / 5.0;
    const double x = cx + r * std::cos(a);
    const double y = cy + r * std::sin(a);
    vehicles.push_back(vehicle(ids[i], {wp(0, x, y), wp(60, x, y)}));
  }
  d["mobility"] = {{"vehicles", vehicles}};
  json events = json::array();
  events.push_back(fixed_event("evc", 0, 60, cx + r, cy));
  d["events"] = events;
  json stations = json::array();
  stations.push_back(station("bsc", cx, cy, 500));
  d["base_stations"] = {{"list", stations}};
  return d;
}

}  // namespace

std::optional<nlohmann::json> builtin_scenario(const std::string& name) {
  if (name == "paper_ld") return paper_doc(false);
  if (name == "paper_hd") return paper_doc(true);
  if (name == "smoke") return smoke_doc();
  if (name == "clique") return clique_doc();
  return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() {
  return {"clique", "paper_hd", "paper_ld", "smoke"};
}

}  // namespace minuet
