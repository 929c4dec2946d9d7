#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s4/s4_scheme.hpp"

namespace s4 {

// Binary container: "S4S1", q (u32), n (u16), dummy count (u16), payload
// length (u64), block count (u32), then the IV and the ciphertext blocks as
// big-endian u16 elements. Each plaintext element carries one byte, so q >= 256.
struct Frame {
  std::uint32_t q = 0;
  std::uint16_t n = 0;
  std::uint16_t dummies = 0;
  std::uint64_t payload_length = 0;
  Block iv;
  std::vector<Block> blocks;

  std::vector<std::uint8_t> encode() const;
  static Frame decode(const std::vector<std::uint8_t>& bytes);  // throws FrameError
};

struct FrameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Leading random blocks absorb the receiver's unsynchronized start.
int dummy_blocks(const Scheme& scheme);

Frame encrypt_bytes(const S4Scheme& scheme, const std::vector<std::uint8_t>& data, DeterministicRng& rng);
// rng seeds the receiver's own (unknown to the sender) initial state.
std::vector<std::uint8_t> decrypt_bytes(const S4Scheme& scheme, const Frame& frame, DeterministicRng& rng);

}  // namespace s4
