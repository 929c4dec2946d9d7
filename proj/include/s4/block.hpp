#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s4/gf_linalg.hpp"
#include "s4/rng.hpp"

namespace s4 {

// One symbol per entry: a single bit-string for the modes, n field elements for S4.
using Block = std::vector<std::uint64_t>;

// Group structure on blocks: XOR on bit-strings, addition mod q on field vectors.
class BlockSpace {
 public:
  static BlockSpace bits(int width);
  static BlockSpace field(std::uint32_t q, std::size_t n);

  bool is_bits() const { return q_ == 0; }
  int width() const { return width_; }
  std::uint32_t modulus() const { return q_; }
  std::size_t symbols() const { return n_; }

  Block zero() const { return Block(n_, 0); }
  Block random(DeterministicRng& rng) const;
  Block random_nonzero(DeterministicRng& rng) const;
  Block add(const Block& a, const Block& b) const;
  Block sub(const Block& a, const Block& b) const;
  bool contains(const Block& a) const;
  void require(const Block& a) const;  // throws std::invalid_argument

  FieldVector to_vector(const Block& a) const;
  Block from_vector(const FieldVector& v) const;

  bool operator==(const BlockSpace&) const = default;

 private:
  BlockSpace(std::uint32_t q, int width, std::size_t n) : q_(q), width_(width), n_(n) {}
  std::uint32_t q_;
  int width_;
  std::size_t n_;
};

std::string to_string(const Block& b);

}  // namespace s4
