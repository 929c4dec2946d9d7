#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace s4 {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view s);

// Seed for the index-th independent stream under a master seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

// SplitMix64 generator. Output is identical on every platform.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next();
  // Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  int bit() { return static_cast<int>(next() >> 63); }
  // Independent child generator; advances this one by one draw.
  DeterministicRng split() { return DeterministicRng(mix64(next() ^ 0x6a09e667f3bcc909ULL)); }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace s4
