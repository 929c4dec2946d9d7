#pragma once

#include <cstdint>
#include <vector>

#include "s4/gf_linalg.hpp"
#include "s4/rng.hpp"

namespace s4 {

// Linear map on width-bit blocks over GF(2); output bit i = parity(row[i] & x).
class NilpotentMap {
 public:
  NilpotentMap() = default;
  static NilpotentMap from_matrix(const FieldMatrix& m);  // q must be 2
  // Similar to Jordan-chain form with one chain of length index; index <= width.
  static NilpotentMap sample(int width, int index, DeterministicRng& rng);
  static NilpotentMap zero(int width);

  int width() const { return static_cast<int>(rows_.size()); }
  std::uint64_t apply(std::uint64_t x) const;
  std::uint64_t apply_power(std::uint64_t x, int k) const;
  FieldMatrix matrix() const;
  // Smallest k with N^k = 0, found by repeated powering; 0 if width steps do not suffice.
  int index() const;

 private:
  std::vector<std::uint64_t> rows_;
};

}  // namespace s4
