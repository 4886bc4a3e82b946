#pragma once

#include <cstdint>

namespace rydmf {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: draw k of stream `key` is mix(key, k). Streams are
// split by hashing a child index into the key, so per-realization streams do
// not depend on how work is scheduled across threads.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) : key_(mix64(key ^ 0x5851f42d4c957f2dULL)) {}

  constexpr std::uint64_t next_u64() {
    return mix64(key_ ^ mix64(counter_++ * 0xd1342543de82ef95ULL));
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  constexpr CounterRng split(std::uint64_t child) const {
    return CounterRng(mix64(key_ + mix64(child)));
  }

  constexpr std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Seed of realization `index` under a master seed.
constexpr std::uint64_t realization_seed(std::uint64_t master_seed, std::uint64_t index) {
  return CounterRng(master_seed).split(index).key();
}

}  // namespace rydmf
