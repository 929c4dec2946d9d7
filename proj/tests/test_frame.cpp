#include <doctest.h>

#include "s4/frame.hpp"
#include "s4/keyfile.hpp"

using namespace s4;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, DeterministicRng& rng) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng.below(256));
  return v;
}

KeyFile test_key(std::uint64_t seed, SwitchKind kind = SwitchKind::time_mod) {
  DeterministicRng rng(seed);
  return generate_keyfile(128, 257, 4, 2, kind, rng);
}

}  // namespace

TEST_CASE("key file JSON round trip") {
  const KeyFile k = test_key(1, SwitchKind::ciphertext_driven);
  const KeyFile back = KeyFile::from_json(k.to_json());
  CHECK(back.key == k.key);
  CHECK(back.q == k.q);
  CHECK(back.n == k.n);
  CHECK(back.ell == k.ell);
  CHECK(back.public_seed == k.public_seed);
  CHECK(back.rule.kind == SwitchKind::ciphertext_driven);
  CHECK(back.to_json() == k.to_json());
  CHECK(test_key(1, SwitchKind::ciphertext_driven).to_json() == k.to_json());
  CHECK(validate_params(k.scheme()->params()).ok());
  CHECK_THROWS(KeyFile::from_json("{}"));
  CHECK_THROWS(KeyFile::from_json("not json"));
  std::string bad = k.to_json();
  bad.replace(bad.find("\"q\": 257"), 8, "\"q\": 256");
  CHECK_THROWS(KeyFile::from_json(bad));
}

TEST_CASE("byte round trip across sizes") {
  const auto scheme = test_key(2).scheme();
  DeterministicRng rng(3);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 255u, 4096u}) {
    CAPTURE(n);
    const auto data = random_bytes(n, rng);
    const Frame f = encrypt_bytes(*scheme, data, rng);
    CHECK(f.dummies == dummy_blocks(*scheme));
    const Frame g = Frame::decode(f.encode());
    CHECK(g.encode() == f.encode());
    DeterministicRng receiver(99 + n);
    CHECK(decrypt_bytes(*scheme, g, receiver) == data);
  }
}

TEST_CASE("ciphertext-driven keys round trip too") {
  const auto scheme = test_key(4, SwitchKind::ciphertext_driven).scheme();
  DeterministicRng rng(5);
  const auto data = random_bytes(1000, rng);
  const Frame f = encrypt_bytes(*scheme, data, rng);
  DeterministicRng receiver(6);
  CHECK(decrypt_bytes(*scheme, f, receiver) == data);
}

TEST_CASE("malformed frames") {
  const auto scheme = test_key(7).scheme();
  DeterministicRng rng(8);
  const auto bytes = encrypt_bytes(*scheme, random_bytes(40, rng), rng).encode();
  auto bad_magic = bytes;
  bad_magic[3] = '2';
  CHECK_THROWS_AS(Frame::decode(bad_magic), FrameError);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(Frame::decode(truncated), FrameError);
  CHECK_THROWS_AS(Frame::decode({}), FrameError);
  auto extended = bytes;
  extended.push_back(0);
  CHECK_THROWS_AS(Frame::decode(extended), FrameError);
  auto out_of_range = bytes;
  out_of_range[out_of_range.size() - 2] = 0xff;
  CHECK_THROWS_AS(Frame::decode(out_of_range), FrameError);

  DeterministicRng r2(9);
  const auto other_shape = generate_keyfile(128, 263, 4, 2, SwitchKind::time_mod, r2).scheme();
  DeterministicRng rx(1);
  CHECK_THROWS_AS(decrypt_bytes(*other_shape, Frame::decode(bytes), rx), FrameError);
}

TEST_CASE("corrupted block garbles a bounded window") {
  const auto scheme = test_key(10).scheme();
  DeterministicRng rng(11);
  const auto data = random_bytes(4 * 60, rng);
  Frame f = encrypt_bytes(*scheme, data, rng);
  const std::size_t k = 30;
  f.blocks[k][0] = (f.blocks[k][0] + 1) % f.q;
  DeterministicRng receiver(12);
  const std::vector<std::uint8_t> out = decrypt_bytes(*scheme, f, receiver);
  REQUIRE(out.size() == data.size());
  const std::size_t w = static_cast<std::size_t>(scheme->resync_window());
  std::size_t garbled = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    // blocks[k] is c(k+1); plaintext index j is recovered at receiver step j+1.
    const std::size_t j = i / 4 + f.dummies + 1;
    if (out[i] != data[i]) CHECK((j >= k && j <= k + w));
    garbled += out[i] != data[i];
  }
  CHECK(garbled > 0);
}
