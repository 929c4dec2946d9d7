#include "s4/prp_family.hpp"

#include <atomic>
#include <stdexcept>

namespace s4 {

std::string SecretKey::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

SecretKey SecretKey::from_hex(std::string_view hex) {
  if (hex.size() % 2 || hex.empty()) throw std::invalid_argument("key hex has odd or zero length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit in key");
  };
  SecretKey k;
  for (std::size_t i = 0; i < hex.size(); i += 2)
    k.bytes.push_back(static_cast<std::uint8_t>(nib(hex[i]) * 16 + nib(hex[i + 1])));
  k.bits = static_cast<int>(k.bytes.size() * 8);
  return k;
}

SecretKey gen_key(int k_bits, DeterministicRng& rng) {
  if (k_bits < 8 || k_bits % 8) throw std::invalid_argument("key size must be a positive multiple of 8");
  SecretKey k;
  k.bits = k_bits;
  std::uint64_t word = 0;
  for (int i = 0; i < k_bits / 8; ++i) {
    if (i % 8 == 0) word = rng.next();
    k.bytes.push_back(static_cast<std::uint8_t>(word & 0xff));
    word >>= 8;
  }
  return k;
}

std::uint64_t label_seed(const SecretKey& key, std::string_view label) {
  std::uint64_t h = fnv1a64(key.bytes.data(), key.bytes.size());
  const unsigned char sep = 0;
  h = fnv1a64(&sep, 1, h);
  h = fnv1a64(label.data(), label.size(), h);
  return mix64(h);
}

DeterministicRng derive_rng(const SecretKey& key, std::string_view label) {
  return DeterministicRng(label_seed(key, label));
}

ElementPermutation::ElementPermutation(std::vector<Elem> forward) : fwd_(std::move(forward)) {
  const std::size_t q = fwd_.size();
  inv_.assign(q, 0);
  std::vector<bool> seen(q, false);
  for (std::size_t x = 0; x < q; ++x) {
    const Elem y = fwd_[x];
    if (y >= q || seen[y]) throw std::invalid_argument("permutation table is not a bijection");
    seen[y] = true;
    inv_[y] = static_cast<Elem>(x);
  }
  for (std::size_t x = 0; x < q; ++x)
    if (inv_[fwd_[x]] != x) throw std::logic_error("permutation inverse check failed");
}

ElementPermutation ElementPermutation::identity(std::uint32_t q) {
  std::vector<Elem> t(q);
  for (std::uint32_t i = 0; i < q; ++i) t[i] = i;
  return ElementPermutation(std::move(t));
}

static ElementPermutation fisher_yates(std::uint32_t q, DeterministicRng& rng) {
  if (q == 0 || q > kMaxTableSize) throw std::invalid_argument("permutation size out of table range");
  std::vector<Elem> t(q);
  for (std::uint32_t i = 0; i < q; ++i) t[i] = i;
  for (std::uint32_t i = q - 1; i > 0; --i) std::swap(t[i], t[rng.below(i + 1)]);
  return ElementPermutation(std::move(t));
}

ElementPermutation derive_element_permutation(const SecretKey& key, std::uint32_t q,
                                              std::string_view label) {
  DeterministicRng rng = derive_rng(key, label);
  return fisher_yates(q, rng);
}

ElementPermutation sample_uniform_permutation(std::uint32_t q, DeterministicRng& rng) {
  return fisher_yates(q, rng);
}

FieldVector apply_entrywise(const ElementPermutation& perm, const FieldVector& v, Direction dir) {
  if (perm.size() != v.q) throw ModulusMismatch("permutation size differs from vector modulus");
  FieldVector r(v.q, v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i)
    r.v[i] = dir == Direction::forward ? perm.forward(v.v[i]) : perm.inverse(v.v[i]);
  return r;
}

BlockPermutation::BlockPermutation(const SecretKey& key, int width, int rounds) : width_(width) {
  if (width < 2 || width > 64 || width % 2) throw std::invalid_argument("block width must be even, 2..64");
  if (rounds < 4) throw std::invalid_argument("Feistel needs at least 4 rounds");
  half_mask_ = width == 64 ? 0xffffffffULL : ((1ULL << (width / 2)) - 1);
  const std::uint64_t digest = mix64(fnv1a64(key.bytes.data(), key.bytes.size()));
  for (int r = 0; r < rounds; ++r)
    round_keys_.push_back(mix64(digest ^ (static_cast<std::uint64_t>(r + 1) * 0x9E3779B97F4A7C15ULL)));
}

void BlockPermutation::check(std::uint64_t x) const {
  if (width_ < 64 && (x >> width_)) throw std::invalid_argument("block wider than cipher width");
}

std::uint64_t BlockPermutation::round_fn(std::uint64_t half, std::size_t r) const {
  return mix64(half ^ round_keys_[r]) & half_mask_;
}

std::uint64_t BlockPermutation::encrypt(std::uint64_t x) const {
  check(x);
  const int h = width_ / 2;
  std::uint64_t l = (x >> h) & half_mask_, r = x & half_mask_;
  for (std::size_t i = 0; i < round_keys_.size(); ++i) {
    const std::uint64_t nl = r;
    r = l ^ round_fn(r, i);
    l = nl;
  }
  return (l << h) | r;
}

std::uint64_t BlockPermutation::decrypt(std::uint64_t y) const {
  check(y);
  const int h = width_ / 2;
  std::uint64_t l = (y >> h) & half_mask_, r = y & half_mask_;
  for (std::size_t i = round_keys_.size(); i-- > 0;) {
    const std::uint64_t pr = l;
    l = r ^ round_fn(l, i);
    r = pr;
  }
  return (l << h) | r;
}

static void check_exhaustive_width(const BlockPermutation& bp) {
  if (bp.width() > 24) throw std::invalid_argument("exhaustive check limited to width <= 24");
}

bool is_bijection_serial(const BlockPermutation& bp) {
  check_exhaustive_width(bp);
  const std::uint64_t n = 1ULL << bp.width();
  std::vector<bool> seen(n, false);
  for (std::uint64_t x = 0; x < n; ++x) {
    const std::uint64_t y = bp.encrypt(x);
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

bool is_bijection(const BlockPermutation& bp) {
  check_exhaustive_width(bp);
  const std::int64_t n = std::int64_t(1) << bp.width();
  std::vector<std::atomic<std::uint8_t>> seen(static_cast<std::size_t>(n));
  for (auto& s : seen) s.store(0, std::memory_order_relaxed);
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(static)
  for (std::int64_t x = 0; x < n; ++x) {
    const std::uint64_t y = bp.encrypt(static_cast<std::uint64_t>(x));
    if (seen[y].exchange(1, std::memory_order_relaxed)) ok.store(false, std::memory_order_relaxed);
  }
  return ok;
}

}  // namespace s4
