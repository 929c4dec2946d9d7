#include <doctest.h>

#include "s4/s4_cipher.hpp"
#include "s4/s4_scheme.hpp"
#include "s4/sync_channel.hpp"
#include "support/ref_s4.hpp"

using namespace s4;

namespace {

std::shared_ptr<const S4Params> random_params(DeterministicRng& rng, std::uint32_t q, std::size_t n, int ell) {
  return std::make_shared<const S4Params>(gen_params(128, q, n, ell, rng).params);
}

std::shared_ptr<const S4Params> example_params(bool verbatim_d) {
  S4Matrices m = f7_example_matrices();
  if (!verbatim_d) m.D.clear();
  return std::make_shared<const S4Params>(params_from_matrices(m, f7_example_permutation()));
}

}  // namespace

TEST_CASE("generated parameters validate") {
  DeterministicRng rng(1);
  for (std::uint32_t q : {7u, 257u})
    for (std::size_t n : {3u, 4u})
      for (int ell : {1, 2, 3}) {
        auto p = random_params(rng, q, n, ell);
        const ValidationReport r = validate_params(*p);
        INFO(r.summary());
        CHECK(r.ok());
        CHECK(p->m0 == n);
        CHECK(p->n0 >= 1);
        CHECK(p->n0 <= static_cast<int>(n));
        CHECK(semigroup_nilpotency_index(p->Q, static_cast<int>(n)) == p->n0);
        CHECK(p->sync_delay() == p->n0 + p->mem_index);
      }
}

TEST_CASE("key derivation is deterministic and key dependent") {
  DeterministicRng rng(2);
  const SecretKey k1 = gen_key(128, rng), k2 = gen_key(128, rng);
  const S4Params a = derive_params(k1, 257, 4, 2, 99), b = derive_params(k1, 257, 4, 2, 99);
  const S4Params c = derive_params(k2, 257, 4, 2, 99);
  CHECK(a.W == b.W);
  CHECK(a.L == b.L);
  CHECK(a.perm == b.perm);
  CHECK_FALSE(a.W == c.W);
  CHECK_FALSE(a.perm == c.perm);
  // Public part depends on the public seed only.
  CHECK(a.Q == c.Q);
  CHECK(a.M == c.M);
  CHECK_THROWS(derive_params(k1, 6, 4, 2, 1));
  CHECK_THROWS(derive_params(k1, 257, 1, 2, 1));
}

TEST_CASE("printed example: identities as printed") {
  const auto p = example_params(true);
  const ValidationReport r = validate_params(*p);
  CHECK(r.a_identity == std::vector<bool>{true, true});
  CHECK(r.d_identity[1]);
  CHECK_FALSE(r.d_identity[0]);
  CHECK_FALSE(r.d_identity_minus[0]);
  CHECK(p->n0 == 2);
  CHECK(p->mem_index == 3);
  CHECK_FALSE(r.ok());
  CHECK(validate_params(*example_params(false)).ok());
}

TEST_CASE("switching rules") {
  const FieldVector c(7, {1, 4, 4});
  CHECK(switch_index(SwitchRule{SwitchKind::ciphertext_driven, 2, 0}, 5, &c) == 2);
  CHECK(switch_index(SwitchRule{SwitchKind::ciphertext_driven, 3, 0}, 5, &c) == 1);
  const SwitchRule ex = f7_example_rule();
  CHECK(switch_index(ex, 1, nullptr) == 2);
  CHECK(switch_index(ex, 2, nullptr) == 1);
  CHECK(switch_index(ex, 3, nullptr) == 2);
  CHECK(switch_index(SwitchRule{SwitchKind::time_mod, 3, 0}, 4, nullptr) == 1);
  CHECK_THROWS(switch_index(SwitchRule{SwitchKind::ciphertext_driven, 2, 0}, 1, nullptr));
}

TEST_CASE("encryptor matches the straight-line evaluator") {
  DeterministicRng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t q = trial % 2 ? 7 : 257;
    const std::size_t n = 3 + trial % 2;
    const int ell = 1 + trial % 3;
    auto p = random_params(rng, q, n, ell);
    const FieldVector s0 = random_vector(q, n, rng), mem0 = random_vector(q, n, rng), c0 = random_vector(q, n, rng);
    S4Encryptor enc(p, default_rule(ell), s0, mem0, c0);
    std::vector<s4test::IntVec> plain;
    std::vector<s4test::IntVec> got;
    CHECK_FALSE(enc.start().has_value());
    for (int t = 0; t < 12; ++t) {
      const FieldVector x = random_vector(q, n, rng);
      plain.push_back(s4test::to_int(x));
      got.push_back(s4test::to_int(enc.step(x)));
    }
    got.push_back(s4test::to_int(enc.stop()));
    CHECK(got == s4test::ref_encrypt(*p, 0, plain, s4test::to_int(s0), s4test::to_int(mem0), s4test::to_int(c0)));
    CHECK_THROWS(enc.step(random_vector(q, n, rng)));
  }
}

TEST_CASE("receiver recovers plaintext once synchronized") {
  DeterministicRng rng(4);
  for (SwitchKind kind : {SwitchKind::time_mod, SwitchKind::ciphertext_driven}) {
    auto p = random_params(rng, 257, 4, 2);
    const SwitchRule rule{kind, 2, 0};
    const FieldVector mem0 = random_vector(257, 4, rng), c0 = random_vector(257, 4, rng);
    S4Encryptor enc(p, rule, random_vector(257, 4, rng), mem0, c0);
    S4Receiver dec(p, rule, random_vector(257, 4, rng), mem0, c0);
    enc.start();
    CHECK_FALSE(dec.decrypt_step(nullptr).has_value());
    std::vector<FieldVector> plain{FieldVector()};
    for (std::uint64_t t = 1; t <= 20; ++t) {
      plain.push_back(random_vector(257, 4, rng));
      const FieldVector c = enc.step(plain.back());
      const auto out = dec.decrypt_step(&c);
      if (t == 1) {
        CHECK_FALSE(out.has_value());
        continue;
      }
      REQUIRE(out.has_value());
      if (t >= static_cast<std::uint64_t>(p->n0) + 2) CHECK(*out == plain[t - 1]);
    }
  }
}

TEST_CASE("synchronized encryptor output decrypts") {
  DeterministicRng rng(5);
  auto p = random_params(rng, 257, 4, 3);
  const SwitchRule rule = default_rule(3);
  const FieldVector mem0 = random_vector(257, 4, rng), c0 = random_vector(257, 4, rng);
  S4Receiver se(p, rule, random_vector(257, 4, rng), mem0, c0);
  S4Receiver dec(p, rule, random_vector(257, 4, rng), mem0, c0);
  dec.decrypt_step(nullptr);
  const FieldVector c1 = se.sync_start();
  CHECK(c1 == c0);
  dec.decrypt_step(&c1);
  for (int t = 2; t < 20; ++t) {
    const FieldVector x = random_vector(257, 4, rng);
    const FieldVector c = se.sync_step(x);
    const auto out = dec.decrypt_step(&c);
    REQUIRE(out.has_value());
    if (t >= p->n0 + 2) CHECK(*out == x);
  }
}

TEST_CASE("state error follows the nilpotent law") {
  DeterministicRng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint32_t q = trial % 2 ? 7 : 257;
    const std::size_t n = 3 + trial % 2;
    const int ell = 1 + trial % 3;
    const SwitchRule rule{trial % 4 == 3 ? SwitchKind::ciphertext_driven : SwitchKind::time_mod, ell, 0};
    auto p = random_params(rng, q, n, ell);
    const FieldVector mem0 = random_vector(q, n, rng), c0 = random_vector(q, n, rng);
    S4Encryptor enc(p, rule, random_vector(q, n, rng), mem0, c0);
    S4Receiver dec(p, rule, random_vector(q, n, rng), mem0, c0);
    enc.start();
    dec.decrypt_step(nullptr);
    std::vector<FieldVector> cs{c0}, es{FieldVector()};
    for (std::uint64_t t = 1; t <= 12; ++t) {
      cs.push_back(enc.step(random_vector(q, n, rng)));
      dec.decrypt_step(&cs.back());
      es.push_back(error_vector(enc, dec));
      if (t >= 2) {
        const int j = switch_index(rule, t - 1, &cs[t - 1]);
        CHECK(es[t] == p->Q[j - 1] * es[t - 1]);
      }
      if (t >= static_cast<std::uint64_t>(p->n0) + 1) CHECK(es[t].is_zero());
    }
  }
}

TEST_CASE("printed example: error vanishes after two clocks") {
  const auto p = example_params(true);
  const F7ExampleInit init = f7_example_init();
  S4Encryptor enc(p, f7_example_rule(), init.s0, init.mem0, init.c0);
  S4Receiver dec(p, f7_example_rule(), init.s_hat1, init.mem0, init.c0);
  enc.start();
  dec.decrypt_step(nullptr);
  DeterministicRng rng(7);
  const FieldVector c1 = enc.step(random_vector(7, 3, rng));
  dec.decrypt_step(&c1);
  CHECK(error_vector(enc, dec) == FieldVector(7, {5, 5, 3}));
  const FieldVector c2 = enc.step(random_vector(7, 3, rng));
  dec.decrypt_step(&c2);
  CHECK(error_vector(enc, dec).is_zero());
  CHECK(p->Q[1] * FieldVector(7, {5, 5, 3}) == FieldVector(7, 3));
}

namespace {

// Runs T steps and returns per-step live states s(t+1) plus the history c(1..T+1).
struct Run {
  std::vector<FieldVector> states;  // states[t] = s(t+1)
  CipherHistory hist;
};

Run run_plain(std::shared_ptr<const S4Params> p, const SwitchRule& rule, const FieldVector& s0,
              const FieldVector& mem0, const FieldVector& c0, int steps, DeterministicRng& rng) {
  Run r;
  r.hist.mem0 = mem0;
  r.states.push_back(FieldVector());
  S4Encryptor enc(p, rule, s0, mem0, c0);
  enc.start();
  for (int t = 1; t <= steps; ++t) {
    r.hist.blocks.push_back(enc.step(random_vector(p->q, p->n, rng)));
    r.states.push_back(enc.state());
  }
  r.hist.blocks.push_back(enc.pending());
  return r;
}

}  // namespace

TEST_CASE("state reconstruction from ciphertexts") {
  DeterministicRng rng(8);
  for (int trial = 0; trial < 12; ++trial) {
    const std::uint32_t q = trial % 2 ? 7 : 257;
    const std::size_t n = 3 + trial % 2;
    const int ell = 1 + trial % 3;
    const SwitchRule rule{trial % 3 == 2 ? SwitchKind::ciphertext_driven : SwitchKind::time_mod, ell, 0};
    auto p = random_params(rng, q, n, ell);
    const int steps = p->sync_delay() + 25;
    Run r = run_plain(p, rule, random_vector(q, n, rng), random_vector(q, n, rng), random_vector(q, n, rng), steps, rng);
    for (int t = p->sync_delay(); t <= steps; ++t)
      CHECK(reconstruct_state(*p, rule, r.hist, static_cast<std::uint64_t>(t)) == r.states[t]);
    // A window that starts late but still covers the read range suffices.
    const std::uint64_t t = static_cast<std::uint64_t>(steps);
    CipherHistory tail;
    tail.first = t - p->n0 - p->mem_index + 1;
    tail.blocks.assign(r.hist.blocks.begin() + static_cast<long>(tail.first - 1), r.hist.blocks.end());
    CHECK(reconstruct_state(*p, rule, tail, t) == r.states[t]);
    CHECK_THROWS(reconstruct_state(*p, rule, r.hist, static_cast<std::uint64_t>(p->sync_delay() - 1)));
  }
}

TEST_CASE("printed example: reconstruction with derived and printed D") {
  const F7ExampleInit init = f7_example_init();
  DeterministicRng rng(9);
  auto derived = example_params(false);
  Run r = run_plain(derived, f7_example_rule(), init.s0, init.mem0, init.c0, 20, rng);
  for (int t = derived->sync_delay(); t <= 20; ++t)
    CHECK(reconstruct_state(*derived, f7_example_rule(), r.hist, t) == r.states[t]);

  // The printed D_1 breaks D = Q + R L, and reconstruction (which relies on it) drifts.
  auto printed = example_params(true);
  DeterministicRng rng2(9);
  Run v = run_plain(printed, f7_example_rule(), init.s0, init.mem0, init.c0, 20, rng2);
  int mismatches = 0;
  for (int t = printed->sync_delay(); t <= 20; ++t)
    mismatches += !(reconstruct_state(*printed, f7_example_rule(), v.hist, t) == v.states[t]);
  CHECK(mismatches > 0);
}

TEST_CASE("malformed parameter sets are rejected") {
  S4Matrices m = f7_example_matrices();
  m.F[0] = FieldMatrix(7, {{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
  CHECK_THROWS_AS(params_from_matrices(m, f7_example_permutation()), NotInvertible);
  S4Matrices m2 = f7_example_matrices();
  m2.Q[0] = FieldMatrix::identity(7, 3);
  CHECK_THROWS_AS(params_from_matrices(m2, f7_example_permutation()), std::invalid_argument);
  S4Matrices m3 = f7_example_matrices();
  m3.L.pop_back();
  CHECK_THROWS_AS(params_from_matrices(m3, f7_example_permutation()), DimensionMismatch);
  CHECK_THROWS_AS(params_from_matrices(f7_example_matrices(), ElementPermutation::identity(5)), ModulusMismatch);
}
