#include "radio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace minuet {

Adjacency build_adjacency(const std::vector<VehicleState>& vehicles, double range_m) {
  Adjacency adj;
  for (const VehicleState& v : vehicles) adj[v.id];  // every vehicle gets an entry

  if (vehicles.empty() || range_m <= 0.0) return adj;

  // bucket by cell of edge length = range; neighbors live in the 3x3 block
  const double cell = range_m;
  const auto key = [cell](const Position& p) {
    const auto cx = static_cast<std::int64_t>(std::floor(p.x / cell));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / cell));
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
  };
  std::unordered_map<std::uint64_t, std::vector<const VehicleState*>> grid;
  grid.reserve(vehicles.size());
  for (const VehicleState& v : vehicles) grid[key(v.pos)].push_back(&v);

  for (const VehicleState& v : vehicles) {
    std::vector<VehicleId>& nbrs = adj[v.id];
    const auto cx = static_cast<std::int64_t>(std::floor(v.pos.x / cell));
    const auto cy = static_cast<std::int64_t>(std::floor(v.pos.y / cell));
    for (std::int64_t gx = cx - 1; gx <= cx + 1; ++gx) {
      for (std::int64_t gy = cy - 1; gy <= cy + 1; ++gy) {
        const std::uint64_t k =
            (static_cast<std::uint64_t>(gx) << 32) ^ static_cast<std::uint32_t>(gy);
        auto it = grid.find(k);
        if (it == grid.end()) continue;
        for (const VehicleState* u : it->second) {
          if (u->id == v.id) continue;
          if (distance(u->pos, v.pos) <= range_m) nbrs.push_back(u->id);
        }
      }
    }
    std::sort(nbrs.begin(), nbrs.end(), id_less);
  }
  return adj;
}

std::vector<const BaseStation*> stations_in_range(const Position& pos,
                                                  const std::vector<BaseStation>& stations) {
  std::vector<const BaseStation*> out;
  for (const BaseStation& s : stations) {
    if (distance(pos, s.pos) <= s.range_m) out.push_back(&s);
  }
  return out;
}

}  // namespace minuet
