#include <doctest.h>

#include "s4/gf_linalg.hpp"
#include "s4/sync_channel.hpp"
#include "support/ref_s4.hpp"

using namespace s4;

TEST_CASE("scalar field ops agree with integer arithmetic") {
  DeterministicRng rng(1);
  for (std::uint32_t q : {2u, 7u, 257u, 65521u, 2147483647u}) {
    for (int i = 0; i < 200; ++i) {
      const Elem a = static_cast<Elem>(rng.below(q)), b = static_cast<Elem>(rng.below(q));
      CHECK(fadd(a, b, q) == (std::uint64_t(a) + b) % q);
      CHECK(fsub(a, b, q) == (std::uint64_t(a) + q - b) % q);
      CHECK(fmul(a, b, q) == (std::uint64_t(a) * b) % q);
      CHECK(fadd(a, fneg(a, q), q) == 0);
      if (a != 0) CHECK(fmul(a, finv(a, q), q) == 1);
    }
  }
  CHECK_THROWS_AS(finv(0, 7), NotInvertible);
}

TEST_CASE("every nonzero element of F_257 has an inverse") {
  for (Elem a = 1; a < 257; ++a) CHECK(fmul(a, finv(a, 257), 257) == 1);
}

TEST_CASE("primality guard") {
  CHECK(is_prime(257));
  CHECK_FALSE(is_prime(6));
  CHECK_FALSE(is_prime(1));
  CHECK_THROWS_AS(require_prime(6), std::invalid_argument);
}

TEST_CASE("matrix product matches plain integer product") {
  DeterministicRng rng(2);
  for (int i = 0; i < 50; ++i) {
    const std::uint32_t q = i % 2 ? 7 : 257;
    const std::size_t r = 1 + rng.below(5), k = 1 + rng.below(5), c = 1 + rng.below(5);
    const FieldMatrix a = random_matrix(q, r, k, rng), b = random_matrix(q, k, c, rng);
    const auto ref = s4test::int_mul(s4test::to_int(a), s4test::to_int(b), q);
    CHECK(s4test::to_int(a * b) == ref);
    const FieldVector x = random_vector(q, k, rng);
    CHECK(s4test::to_int(a * x) == s4test::int_apply(s4test::to_int(a), s4test::to_int(x), q));
  }
}

TEST_CASE("shape and modulus mismatches are rejected") {
  const FieldMatrix a(7, 2, 3), b(7, 2, 3), c(257, 3, 3);
  CHECK_THROWS_AS(a * b, DimensionMismatch);
  CHECK_THROWS_AS(a * c, ModulusMismatch);
  CHECK_THROWS_AS(a * FieldVector(7, 2), DimensionMismatch);
  CHECK_THROWS_AS(mat_inv(a), DimensionMismatch);
}

TEST_CASE("inverse of random invertible matrices") {
  DeterministicRng rng(3);
  for (int i = 0; i < 40; ++i) {
    const std::uint32_t q = i % 2 ? 7 : 257;
    const std::size_t n = 1 + rng.below(6);
    const FieldMatrix a = sample_invertible(q, n, rng);
    CHECK(mat_rank(a) == n);
    CHECK(a * mat_inv(a) == FieldMatrix::identity(q, n));
    CHECK(mat_inv(a) * a == FieldMatrix::identity(q, n));
  }
  CHECK_THROWS_AS(mat_inv(FieldMatrix(7, {{1, 2}, {2, 4}})), NotInvertible);
}

TEST_CASE("facts of the printed F7 example") {
  const S4Matrices m = f7_example_matrices();
  CHECK((m.Q[0] * m.Q[0]).is_zero());
  CHECK((m.Q[0] * m.Q[1]).is_zero());
  CHECK(mat_rank(m.Q[0]) == 1);
  CHECK_THROWS_AS(mat_inv(m.Q[0]), NotInvertible);
  CHECK(mat_inv(m.F[0]) == FieldMatrix(7, {{5, 1, 5}, {1, 0, 0}, {5, 1, 0}}));
  CHECK(semigroup_nilpotency_index(m.Q, 3) == 2);
  CHECK(semigroup_nilpotency_index({m.M}, 3) == 3);
  CHECK(m.M.strictly_upper());
}

TEST_CASE("nilpotency index: parallel and serial agree") {
  DeterministicRng rng(4);
  for (int i = 0; i < 30; ++i) {
    const std::uint32_t q = i % 3 ? 7 : 257;
    const std::size_t n = 2 + rng.below(3);
    const std::size_t ell = 1 + rng.below(3);
    const auto fam = sample_nilpotent_family(q, n, ell, rng);
    const auto par = semigroup_nilpotency_index(fam, static_cast<int>(n));
    CHECK(par == semigroup_nilpotency_index_serial(fam, static_cast<int>(n)));
    REQUIRE(par.has_value());
    CHECK(*par <= static_cast<int>(n));
    // Check the definition directly at the found index.
    std::vector<FieldMatrix> words = fam;
    for (int len = 1; len < *par; ++len) {
      std::vector<FieldMatrix> next;
      for (auto& w : words)
        for (auto& f : fam) next.push_back(w * f);
      words = next;
    }
    for (auto& w : words) CHECK(w.is_zero());
  }
  const std::vector<FieldMatrix> not_nil{FieldMatrix::identity(7, 2)};
  CHECK_FALSE(semigroup_nilpotency_index(not_nil, 4).has_value());
  CHECK_FALSE(semigroup_nilpotency_index_serial(not_nil, 4).has_value());
}

TEST_CASE("strictly upper sampling") {
  DeterministicRng rng(5);
  const FieldMatrix u = random_strictly_upper(257, 5, rng);
  CHECK(u.strictly_upper());
  auto idx = semigroup_nilpotency_index({u}, 5);
  REQUIRE(idx.has_value());
  CHECK(*idx <= 5);
}
