#include <doctest.h>

#include "s4/block_modes.hpp"
#include "s4/nilpotent_map.hpp"

using namespace s4;

namespace {

std::shared_ptr<const Scheme> mode(SchemeId id, std::uint64_t seed, ModeConfig cfg = {}) {
  DeterministicRng rng(seed);
  const SecretKey key = gen_key(128, rng);
  return make_mode(id, key, cfg, rng);
}

const SchemeId kModes[] = {SchemeId::cbc, SchemeId::cfb, SchemeId::dcbc, SchemeId::mdcbc, SchemeId::mcfb};

}  // namespace

TEST_CASE("scheme names round trip") {
  for (auto id : all_schemes()) CHECK(scheme_from_name(scheme_name(id)) == id);
  CHECK_THROWS_AS(scheme_from_name("ecb"), std::invalid_argument);
}

TEST_CASE("mode delays") {
  CHECK(mode(SchemeId::cbc, 1)->delays().d == 0);
  CHECK(mode(SchemeId::cfb, 1)->delays().t_s == 1);
  CHECK(mode(SchemeId::dcbc, 1)->delays().d == 1);
  const auto md = mode(SchemeId::mdcbc, 1, ModeConfig{16, 4, 5, false});
  CHECK(md->delays().d == 1);
  CHECK(md->delays().t_s == 5);
  CHECK(md->delays().t_c == 1);
  const auto mc = mode(SchemeId::mcfb, 1);
  CHECK(mc->delays().d == 0);
  CHECK(mc->delays().t_s == 3);
  CHECK(mc->public_info().f.has_value());
  CHECK(mc->public_info().f->index() == 3);
  CHECK_FALSE(mode(SchemeId::cbc, 1)->public_info().f.has_value());
  DeterministicRng rng(1);
  CHECK_THROWS(make_mode(SchemeId::s4, gen_key(128, rng), {}, rng));
}

TEST_CASE("CBC matches the chaining formula") {
  DeterministicRng rng(2);
  const SecretKey key = gen_key(128, rng);
  const auto cbc = make_mode(SchemeId::cbc, key, {}, rng);
  const BlockPermutation E(key, 16, 4);
  const Block iv = cbc->random_iv(rng);
  auto enc = cbc->make_encryptor(iv, rng);
  CHECK(enc->start() == StepOutput::bottom());
  std::uint64_t chain = iv[0];
  for (int i = 0; i < 20; ++i) {
    const Block p = cbc->space().random(rng);
    chain = E.encrypt(chain ^ p[0]);
    CHECK(enc->step(p) == StepOutput::of({chain}));
  }
}

TEST_CASE("CFB matches the feedback formula") {
  DeterministicRng rng(3);
  const SecretKey key = gen_key(128, rng);
  const auto cfb = make_mode(SchemeId::cfb, key, {}, rng);
  const BlockPermutation E(key, 16, 4);
  const Block iv = cfb->random_iv(rng);
  auto enc = cfb->make_encryptor(iv, rng);
  enc->start();
  std::uint64_t prev = iv[0];
  for (int i = 0; i < 20; ++i) {
    const Block p = cfb->space().random(rng);
    prev = E.encrypt(prev) ^ p[0];
    CHECK(enc->step(p) == StepOutput::of({prev}));
  }
}

TEST_CASE("DCBC emits with one block delay") {
  DeterministicRng rng(4);
  const SecretKey key = gen_key(128, rng);
  const auto dcbc = make_mode(SchemeId::dcbc, key, {}, rng);
  const BlockPermutation E(key, 16, 4);
  const Block iv = dcbc->random_iv(rng);
  auto enc = dcbc->make_encryptor(iv, rng);
  CHECK(enc->start() == StepOutput::bottom());
  std::uint64_t chain = iv[0];
  std::vector<std::uint64_t> expect{iv[0]};
  std::vector<std::uint64_t> got;
  for (int i = 0; i < 10; ++i) {
    const Block p = dcbc->space().random(rng);
    chain = E.encrypt(chain ^ p[0]);
    expect.push_back(chain);
    got.push_back(enc->step(p).block.at(0));
  }
  got.push_back(enc->stop().block.at(0));
  CHECK(got == expect);
}

TEST_CASE("every mode decrypts after its synchronization delay") {
  for (auto id : kModes) {
    for (bool sync : {false, true}) {
      CAPTURE(scheme_name(id));
      CAPTURE(sync);
      auto sch = mode(id, 5 + static_cast<int>(id));
      DeterministicRng rng(10);
      const Block iv = sch->random_iv(rng);
      auto enc = sync ? sch->make_sync_encryptor(iv, rng) : sch->make_encryptor(iv, rng);
      auto dec = sch->make_decryptor(iv, rng);
      std::vector<Block> channel, plain;
      auto push = [&](const StepOutput& o) {
        if (o.has_block()) channel.push_back(o.block);
      };
      push(enc->start());
      for (int i = 0; i < 30; ++i) {
        plain.push_back(sch->space().random(rng));
        push(enc->step(plain.back()));
      }
      push(enc->stop());
      std::vector<Block> out;
      // The t = 0 step: plain encryptors emit bottom, synchronized ones start at t = d.
      dec->step(std::nullopt);
      for (auto& c : channel) {
        const StepOutput o = dec->step(c);
        if (o.has_block()) out.push_back(o.block);
      }
      REQUIRE(out.size() == plain.size());
      const int t_s = sch->delays().t_s;
      for (std::size_t i = static_cast<std::size_t>(t_s - 1); i < plain.size(); ++i) CHECK(out[i] == plain[i]);
    }
  }
}

TEST_CASE("CFB plain and synchronized encryptors agree") {
  auto cfb = mode(SchemeId::cfb, 7);
  DeterministicRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Block iv = cfb->random_iv(rng);
    DeterministicRng ha = rng.split();
    DeterministicRng hb = ha;
    auto e = cfb->make_encryptor(iv, ha);
    auto se = cfb->make_sync_encryptor(iv, hb);
    CHECK(e->start() == se->start());
    for (int i = 0; i < 16; ++i) {
      const Block p = cfb->space().random(rng);
      CHECK(e->step(p) == se->step(p));
    }
    CHECK(e->stop() == se->stop());
  }
}

TEST_CASE("nilpotent feedback map") {
  DeterministicRng rng(9);
  for (int idx = 1; idx <= 8; ++idx) {
    const NilpotentMap f = NilpotentMap::sample(16, idx, rng);
    CHECK(f.index() == idx);
    const std::uint64_t x = rng.below(1u << 16);
    CHECK(f.apply_power(x, idx) == 0);
    CHECK(NilpotentMap::from_matrix(f.matrix()).apply(x) == f.apply(x));
  }
  CHECK(NilpotentMap::zero(16).apply(0xffff) == 0);
}

TEST_CASE("hidden feedback control publishes a decoy") {
  DeterministicRng r1(11), r2(11);
  const SecretKey key = gen_key(128, r1);
  gen_key(128, r2);
  const auto open = make_mode(SchemeId::mcfb, key, ModeConfig{16, 4, 3, false}, r1);
  const auto hidden = make_mode(SchemeId::mcfb, key, ModeConfig{16, 4, 3, true}, r2);
  // Same published map, different behaviour.
  CHECK(open->public_info().f->matrix() == hidden->public_info().f->matrix());
  DeterministicRng rng(12);
  const Block iv = open->random_iv(rng);
  DeterministicRng h1(13), h2(13);
  auto e1 = open->make_encryptor(iv, h1);
  auto e2 = hidden->make_encryptor(iv, h2);
  e1->start();
  e2->start();
  const Block p = open->space().random(rng);
  CHECK_FALSE(e1->step(p) == e2->step(p));
}
