#include "mobility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "rng.hpp"

namespace minuet {

namespace {

double normalize_heading(double rad) {
  const double two_pi = 2.0 * std::numbers::pi;
  double h = std::fmod(rad, two_pi);
  if (h < 0.0) h += two_pi;
  return h;
}

bool parse_double(const std::string& tok, double& out) {
  try {
    size_t used = 0;
    out = std::stod(tok, &used);
    return used == tok.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

}  // namespace

std::optional<std::vector<VehicleTrace>> load_traces(std::istream& in,
                                                     std::vector<std::string>& errors) {
  std::map<VehicleId, VehicleTrace, IdLess> by_id;
  std::string line;
  int line_no = 0;
  bool first_content_line = true;

  while (std::getline(in, line)) {
    ++line_no;
    // strip comments / blanks
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok.size() != 6) {
      errors.push_back("line " + std::to_string(line_no) +
                       ": expected 6 fields (time id x y speed heading), got " +
                       std::to_string(tok.size()));
      first_content_line = false;
      continue;
    }

    TraceSample s;
    double t, x, y, speed, heading;
    const bool numeric = parse_double(tok[0], t) && parse_double(tok[2], x) &&
                         parse_double(tok[3], y) && parse_double(tok[4], speed) &&
                         parse_double(tok[5], heading);
    if (!numeric) {
      // A non-numeric first row is accepted as a column header.
      if (first_content_line) {
        first_content_line = false;
        continue;
      }
      errors.push_back("line " + std::to_string(line_no) + ": malformed numeric field");
      continue;
    }
    first_content_line = false;

    if (t < 0.0) {
      errors.push_back("line " + std::to_string(line_no) + ": negative time");
      continue;
    }
    s.t_s = t;
    s.pos = {x, y};
    s.speed_mps = speed;
    s.heading_rad = normalize_heading(heading);

    VehicleTrace& tr = by_id[tok[1]];
    tr.id = tok[1];
    if (!tr.samples.empty()) {
      const double prev = tr.samples.back().t_s;
      if (s.t_s == prev) {
        errors.push_back("line " + std::to_string(line_no) + ": duplicate timestamp " +
                         tok[0] + " for vehicle " + tok[1]);
        continue;
      }
      if (s.t_s < prev) {
        errors.push_back("line " + std::to_string(line_no) +
                         ": out-of-order timestamp for vehicle " + tok[1]);
        continue;
      }
    }
    tr.samples.push_back(s);
  }

  if (!errors.empty()) return std::nullopt;

  std::vector<VehicleTrace> out;
  out.reserve(by_id.size());
  for (auto& [id, tr] : by_id) out.push_back(std::move(tr));
  return out;
}

std::optional<std::vector<VehicleTrace>> load_traces_file(const std::string& path,
                                                          std::vector<std::string>& errors) {
  std::ifstream in(path);
  if (!in) {
    errors.push_back("cannot open trace file: " + path);
    return std::nullopt;
  }
  return load_traces(in, errors);
}

std::optional<VehicleState> state_at(const VehicleTrace& trace, double t_s) {
  if (trace.samples.empty()) return std::nullopt;
  if (t_s < trace.enter_s() || t_s > trace.exit_s()) return std::nullopt;

  const auto& ss = trace.samples;
  // first sample with t >= t_s
  auto it = std::lower_bound(ss.begin(), ss.end(), t_s,
                             [](const TraceSample& s, double t) { return s.t_s < t; });
  VehicleState v;
  v.id = trace.id;
  if (it == ss.begin() || it->t_s == t_s) {
    v.pos = it->pos;
    v.speed_mps = it->speed_mps;
    v.heading_rad = it->heading_rad;
    return v;
  }
  const TraceSample& hi = *it;
  const TraceSample& lo = *(it - 1);
  const double f = (t_s - lo.t_s) / (hi.t_s - lo.t_s);
  v.pos = {lo.pos.x + f * (hi.pos.x - lo.pos.x), lo.pos.y + f * (hi.pos.y - lo.pos.y)};
  // speed/heading held from the segment start sample
  v.speed_mps = lo.speed_mps;
  v.heading_rad = lo.heading_rad;
  return v;
}

std::vector<VehicleState> active_vehicles(const Scenario& scenario, double t_s) {
  std::vector<VehicleState> out;
  for (const VehicleTrace& tr : scenario.traces) {
    if (auto v = state_at(tr, t_s)) out.push_back(std::move(*v));
  }
  std::sort(out.begin(), out.end(),
            [](const VehicleState& a, const VehicleState& b) { return id_less(a.id, b.id); });
  return out;
}

std::optional<Position> event_position_at(const EventSpec& event, double t_s) {
  if (!event.active_at(t_s)) return std::nullopt;
  const auto& wp = event.waypoints;
  if (wp.empty()) return std::nullopt;
  if (event.kind == EventKind::fixed || wp.size() == 1) return wp.front().pos;

  if (t_s <= wp.front().t_s) return wp.front().pos;
  if (t_s >= wp.back().t_s) return wp.back().pos;
  auto it = std::lower_bound(wp.begin(), wp.end(), t_s,
                             [](const EventWaypoint& w, double t) { return w.t_s < t; });
  if (it->t_s == t_s) return it->pos;
  const EventWaypoint& hi = *it;
  const EventWaypoint& lo = *(it - 1);
  const double f = (t_s - lo.t_s) / (hi.t_s - lo.t_s);
  return Position{lo.pos.x + f * (hi.pos.x - lo.pos.x),
                  lo.pos.y + f * (hi.pos.y - lo.pos.y)};
}

std::vector<VehicleTrace> generate_flow_traces(const std::vector<FlowSpec>& flows,
                                               double duration_s,
                                               std::uint64_t seed) {
  std::vector<VehicleTrace> out;
  char id_buf[32];

  for (size_t fi = 0; fi < flows.size(); ++fi) {
    const FlowSpec& flow = flows[fi];
    if (flow.rate_per_s <= 0.0) continue;
    Rng rng(derive_seed(seed, "flow-" + std::to_string(fi)));

    const double len = distance(flow.from, flow.to);
    if (len <= 0.0) continue;
    const double dx = (flow.to.x - flow.from.x) / len;
    const double dy = (flow.to.y - flow.from.y) / len;
    const double heading = normalize_heading(std::atan2(dy, dx));
    const double min_speed = std::max(0.5, flow.speed_mps - flow.speed_jitter_mps);

    // Pre-warm: start arrivals one full (slowest) traversal before t=0 so the
    // road is populated from the first tick.
    double t = -len / min_speed;
    int n = 0;
    while (true) {
      t += rng.exponential(flow.rate_per_s);
      if (t > duration_s) break;
      const double jitter = flow.speed_jitter_mps > 0.0
                                ? rng.uniform(-flow.speed_jitter_mps, flow.speed_jitter_mps)
                                : 0.0;
      const double speed = std::max(0.5, flow.speed_mps + jitter);
      const double exit = t + len / speed;
      if (exit <= 0.0) {
        ++n;  // left the road before the run started; id stays consumed
        continue;
      }

      VehicleTrace tr;
      std::snprintf(id_buf, sizeof id_buf, "f%02zuv%04d", fi, n);
      tr.id = id_buf;
      ++n;

      TraceSample a;
      a.speed_mps = speed;
      a.heading_rad = heading;
      if (t >= 0.0) {
        a.t_s = t;
        a.pos = flow.from;
      } else {
        // entered before the run began: clip to t=0 mid-segment
        const double travelled = -t * speed;
        a.t_s = 0.0;
        a.pos = {flow.from.x + dx * travelled, flow.from.y + dy * travelled};
      }
      TraceSample b = a;
      b.t_s = exit;
      b.pos = flow.to;
      tr.samples = {a, b};
      out.push_back(std::move(tr));
    }
  }

  std::sort(out.begin(), out.end(),
            [](const VehicleTrace& a, const VehicleTrace& b) { return id_less(a.id, b.id); });
  return out;
}

}  // namespace minuet
