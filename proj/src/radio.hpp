#pragma once

#include <map>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace minuet {

// Symmetric unit-disk neighbor table for one tick, vehicle id -> sorted
// neighbor ids. Built with a uniform spatial hash (cell = range) so dense
// scenarios stay cheap; must agree exactly with the O(n^2) pairwise filter.
using Adjacency = std::map<VehicleId, std::vector<VehicleId>, IdLess>;

Adjacency build_adjacency(const std::vector<VehicleState>& vehicles, double range_m);

// Stations whose own range covers `pos`, in station order.
std::vector<const BaseStation*> stations_in_range(const Position& pos,
                                                  const std::vector<BaseStation>& stations);

// Per-transmission link fate. Latency is fixed (whole ticks); loss is an
// i.i.d. Bernoulli draw per attempted transmission.
class LinkModel {
 public:
  LinkModel(const RadioConfig& cfg, double tick_s, std::uint64_t seed)
      : cfg_(cfg),
        latency_ticks_(static_cast<Tick>(std::llround(cfg.hop_latency_s / tick_s))),
        rng_(seed) {}

  Tick latency_ticks() const { return latency_ticks_; }

  // True when the transmission comes through (draws from the loss stream).
  bool try_send() { return cfg_.loss_probability <= 0.0 || !rng_.bernoulli(cfg_.loss_probability); }

 private:
  RadioConfig cfg_;
  Tick latency_ticks_;
  Rng rng_;
};

}  // namespace minuet
