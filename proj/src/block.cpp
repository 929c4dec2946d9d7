#include "s4/block.hpp"

#include <sstream>
#include <stdexcept>

namespace s4 {

BlockSpace BlockSpace::bits(int width) {
  if (width < 1 || width > 64) throw std::invalid_argument("bit block width must be 1..64");
  return BlockSpace(0, width, 1);
}

BlockSpace BlockSpace::field(std::uint32_t q, std::size_t n) {
  require_prime(q);
  if (n < 1) throw std::invalid_argument("field block needs n >= 1");
  return BlockSpace(q, 0, n);
}

static std::uint64_t width_mask(int w) { return w == 64 ? ~0ULL : ((1ULL << w) - 1); }

Block BlockSpace::random(DeterministicRng& rng) const {
  Block b(n_);
  for (auto& x : b) x = is_bits() ? (rng.next() & width_mask(width_)) : rng.below(q_);
  return b;
}

Block BlockSpace::random_nonzero(DeterministicRng& rng) const {
  for (;;) {
    Block b = random(rng);
    for (auto x : b)
      if (x) return b;
  }
}

Block BlockSpace::add(const Block& a, const Block& b) const {
  require(a);
  require(b);
  Block r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    r[i] = is_bits() ? (a[i] ^ b[i]) : fadd(static_cast<Elem>(a[i]), static_cast<Elem>(b[i]), q_);
  return r;
}

Block BlockSpace::sub(const Block& a, const Block& b) const {
  require(a);
  require(b);
  Block r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    r[i] = is_bits() ? (a[i] ^ b[i]) : fsub(static_cast<Elem>(a[i]), static_cast<Elem>(b[i]), q_);
  return r;
}

bool BlockSpace::contains(const Block& a) const {
  if (a.size() != n_) return false;
  for (auto x : a)
    if (is_bits() ? (x & ~width_mask(width_)) != 0 : x >= q_) return false;
  return true;
}

void BlockSpace::require(const Block& a) const {
  if (!contains(a)) throw std::invalid_argument("block does not belong to the block space");
}

FieldVector BlockSpace::to_vector(const Block& a) const {
  if (is_bits()) throw std::logic_error("bit blocks have no field-vector form");
  require(a);
  FieldVector v(q_, n_);
  for (std::size_t i = 0; i < n_; ++i) v.v[i] = static_cast<Elem>(a[i]);
  return v;
}

Block BlockSpace::from_vector(const FieldVector& v) const {
  if (is_bits() || v.q != q_ || v.dim() != n_) throw std::invalid_argument("vector does not fit block space");
  return Block(v.v.begin(), v.v.end());
}

std::string to_string(const Block& b) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
  os << ')';
  return os.str();
}

}  // namespace s4
