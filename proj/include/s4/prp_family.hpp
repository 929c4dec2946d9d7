#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "s4/gf_linalg.hpp"
#include "s4/rng.hpp"

namespace s4 {

struct SecretKey {
  std::vector<std::uint8_t> bytes;
  int bits = 0;

  bool operator==(const SecretKey&) const = default;
  std::string hex() const;
  static SecretKey from_hex(std::string_view hex);
};

SecretKey gen_key(int k_bits, DeterministicRng& rng);

// Seed for a labelled derivation stream ("W", "L:1", "perm", ...).
std::uint64_t label_seed(const SecretKey& key, std::string_view label);
DeterministicRng derive_rng(const SecretKey& key, std::string_view label);

class ElementPermutation {
 public:
  ElementPermutation() = default;
  // Validates bijectivity and builds the inverse table.
  explicit ElementPermutation(std::vector<Elem> forward);

  static ElementPermutation identity(std::uint32_t q);

  std::uint32_t size() const { return static_cast<std::uint32_t>(fwd_.size()); }
  Elem forward(Elem x) const { return fwd_.at(x); }
  Elem inverse(Elem y) const { return inv_.at(y); }
  const std::vector<Elem>& forward_table() const { return fwd_; }
  bool operator==(const ElementPermutation& o) const { return fwd_ == o.fwd_; }

 private:
  std::vector<Elem> fwd_, inv_;
};

inline constexpr std::uint32_t kMaxTableSize = 1u << 16;

ElementPermutation derive_element_permutation(const SecretKey& key, std::uint32_t q,
                                              std::string_view label);
ElementPermutation sample_uniform_permutation(std::uint32_t q, DeterministicRng& rng);

enum class Direction { forward, inverse };
FieldVector apply_entrywise(const ElementPermutation& perm, const FieldVector& v,
                            Direction dir = Direction::forward);

// Balanced Feistel network on width-bit blocks (width even, 2..64).
class BlockPermutation {
 public:
  BlockPermutation(const SecretKey& key, int width, int rounds = 4);

  int width() const { return width_; }
  int rounds() const { return static_cast<int>(round_keys_.size()); }
  std::uint64_t encrypt(std::uint64_t x) const;
  std::uint64_t decrypt(std::uint64_t y) const;

 private:
  void check(std::uint64_t x) const;
  std::uint64_t round_fn(std::uint64_t half, std::size_t r) const;

  int width_;
  std::uint64_t half_mask_;
  std::vector<std::uint64_t> round_keys_;
};

// Exhaustive bijection check over all 2^width inputs (width <= 24).
bool is_bijection(const BlockPermutation& bp);
bool is_bijection_serial(const BlockPermutation& bp);

}  // namespace s4
