#include "s4/nilpotent_map.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace s4 {

NilpotentMap NilpotentMap::from_matrix(const FieldMatrix& m) {
  if (m.modulus() != 2 || !m.square() || m.rows() < 1 || m.rows() > 64)
    throw std::invalid_argument("nilpotent map needs a square GF(2) matrix of size 1..64");
  NilpotentMap f;
  f.rows_.assign(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j)) f.rows_[i] |= 1ULL << j;
  return f;
}

NilpotentMap NilpotentMap::zero(int width) {
  if (width < 1 || width > 64) throw std::invalid_argument("bad width");
  NilpotentMap f;
  f.rows_.assign(width, 0);
  return f;
}

NilpotentMap NilpotentMap::sample(int width, int index, DeterministicRng& rng) {
  if (width < 1 || width > 64 || index < 1 || index > width)
    throw std::invalid_argument("nilpotent map index must lie in 1..width");
  // U: one chain of length `index`, remaining coordinates in chains of length <= index.
  FieldMatrix u(2, width, width);
  int start = 0;
  while (start < width) {
    const int len = std::min(index, width - start);
    for (int k = 0; k + 1 < len; ++k) u.set(start + k, start + k + 1, 1);
    start += len;
  }
  const FieldMatrix p = sample_invertible(2, width, rng);
  NilpotentMap f = from_matrix(p * u * mat_inv(p));
  if (f.index() != index) throw std::logic_error("sampled nilpotent map has wrong index");
  return f;
}

std::uint64_t NilpotentMap::apply(std::uint64_t x) const {
  std::uint64_t y = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (std::popcount(rows_[i] & x) & 1) y |= 1ULL << i;
  return y;
}

std::uint64_t NilpotentMap::apply_power(std::uint64_t x, int k) const {
  for (int i = 0; i < k; ++i) x = apply(x);
  return x;
}

FieldMatrix NilpotentMap::matrix() const {
  FieldMatrix m(2, rows_.size(), rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < rows_.size(); ++j) m.set(i, j, (rows_[i] >> j) & 1);
  return m;
}

int NilpotentMap::index() const {
  const FieldMatrix n = matrix();
  FieldMatrix p = n;
  for (int k = 1; k <= width(); ++k) {
    if (p.is_zero()) return k;
    p = p * n;
  }
  return 0;
}

}  // namespace s4
