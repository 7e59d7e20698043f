#pragma once

#include <cstdint>
#include <random>

namespace sklab {

/// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for trial `trial` derived from a master seed. Trials drawn from
/// derived seeds are independent streams and reproducible in any order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial) {
  return mix64(master ^ mix64(trial + 1));
}

/// mt19937_64 engine that remembers the seed it was built from, so results
/// (decompositions, CSV rows) can record the value that reproduces them.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return engine_; }

  Rng derived(std::uint64_t trial) const { return Rng(derive_seed(seed_, trial)); }

  double gaussian() { return std::normal_distribution<double>()(engine_); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sklab
