#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace actlab {

// splitmix64 step: the standard finalizer used to expand one 64-bit seed
// into decorrelated substream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a over the bytes of a name. Stable across platforms; used to derive
// per-component seeds from a master seed.
std::uint64_t fnv1a64(std::string_view name);

// Seed for a named component: master seed xor the name hash, passed through
// one splitmix64 step.
std::uint64_t derive_seed(std::uint64_t master, std::string_view component);

// Seed for one particle's stream: folds ensemble id and particle index into
// the base seed, again via splitmix64, so serial and parallel sweeps draw
// identical numbers.
std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t ensemble, std::uint64_t index);

// Deterministic generator: mt19937_64 with a portable Box-Muller normal.
// std::normal_distribution is not portable across standard libraries, so the
// normal draw is hand-rolled here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; caches the paired draw.
  double normal();

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace actlab
