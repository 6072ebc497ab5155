#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace minuet {

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard;
// the distributions below are written out explicitly because the std::
// distribution objects are allowed to differ between library implementations,
// and run output is required to be byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  bool bernoulli(double p) { return next_unit() < p; }

  // Exponential inter-arrival gap for a Poisson process of the given rate.
  double exponential(double rate_per_s) {
    double u = next_unit();
    while (u <= 0.0) u = next_unit();
    return -std::log(u) / rate_per_s;
  }

 private:
  std::mt19937_64 engine_;
};

// Stable way to derive independent streams (mobility synthesis, radio loss,
// per-flow arrivals) from one scenario seed. FNV-1a over the label, folded
// into the seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : label) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 1099511628211ull;
  }
  h ^= seed + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h == 0 ? 0x6d696e756574ull : h;
}

}  // namespace minuet
