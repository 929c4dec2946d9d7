#include <doctest.h>

#include <set>

#include "s4/prp_family.hpp"

using namespace s4;

TEST_CASE("key generation and hex round trip") {
  DeterministicRng rng(1);
  const SecretKey k = gen_key(128, rng);
  CHECK(k.bits == 128);
  CHECK(k.bytes.size() == 16);
  CHECK(k.hex().size() == 32);
  CHECK(SecretKey::from_hex(k.hex()) == k);
  CHECK_THROWS(SecretKey::from_hex("abc"));
  CHECK_THROWS(SecretKey::from_hex("zz"));
  DeterministicRng rng2(1);
  CHECK(gen_key(128, rng2) == k);
}

TEST_CASE("element permutations are keyed bijections") {
  DeterministicRng rng(2);
  const SecretKey k1 = gen_key(128, rng), k2 = gen_key(128, rng);
  for (std::uint32_t q : {7u, 257u}) {
    const auto p = derive_element_permutation(k1, q, "perm");
    CHECK(p.size() == q);
    std::set<Elem> image(p.forward_table().begin(), p.forward_table().end());
    CHECK(image.size() == q);
    for (Elem x = 0; x < q; ++x) CHECK(p.inverse(p.forward(x)) == x);
    CHECK(derive_element_permutation(k1, q, "perm") == p);
  }
  CHECK_FALSE(derive_element_permutation(k1, 257, "perm") == derive_element_permutation(k2, 257, "perm"));
  CHECK_FALSE(derive_element_permutation(k1, 257, "perm") == derive_element_permutation(k1, 257, "other"));
}

TEST_CASE("non-bijective tables are rejected") {
  CHECK_THROWS_AS(ElementPermutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ElementPermutation({0, 3, 1}), std::invalid_argument);
  CHECK_NOTHROW(ElementPermutation({2, 0, 1}));
}

TEST_CASE("entrywise application and inverse") {
  DeterministicRng rng(3);
  const auto p = sample_uniform_permutation(257, rng);
  const FieldVector v = random_vector(257, 6, rng);
  const FieldVector w = apply_entrywise(p, v);
  for (std::size_t i = 0; i < v.dim(); ++i) CHECK(w[i] == p.forward(v[i]));
  CHECK(apply_entrywise(p, w, Direction::inverse) == v);
}

TEST_CASE("Feistel block permutation") {
  DeterministicRng rng(4);
  const SecretKey k = gen_key(128, rng);
  const BlockPermutation bp(k, 16, 4);
  CHECK(bp.width() == 16);
  CHECK(bp.rounds() == 4);
  for (std::uint64_t x = 0; x < 70000; x += 97) {
    if (x >= (1u << 16)) break;
    CHECK(bp.decrypt(bp.encrypt(x)) == x);
  }
  CHECK(is_bijection(bp));
  CHECK(is_bijection_serial(bp));
  CHECK_THROWS(bp.encrypt(1u << 16));
  CHECK_THROWS(BlockPermutation(k, 15, 4));
  const BlockPermutation other(gen_key(128, rng), 16, 4);
  int diff = 0;
  for (std::uint64_t x = 0; x < 256; ++x) diff += bp.encrypt(x) != other.encrypt(x);
  CHECK(diff > 200);
}
