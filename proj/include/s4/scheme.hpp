#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "s4/block.hpp"
#include "s4/gf_linalg.hpp"
#include "s4/nilpotent_map.hpp"
#include "s4/rng.hpp"

namespace s4 {

enum class SchemeId { s4, cbc, cfb, dcbc, mdcbc, mcfb };

std::string scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string& name);  // throws std::invalid_argument
const std::vector<SchemeId>& all_schemes();

struct Delays {
  int d = 0;    // system delay
  int t_s = 1;  // synchronization delay
  int t_c = 1;  // dummy symbols needed at start
};

// Tagged step result; bottom is the encryptor's "no output", ack the decryptor's.
struct StepOutput {
  enum class Kind { block, bottom, ack };
  Kind kind = Kind::bottom;
  Block block;

  static StepOutput of(Block b) { return {Kind::block, std::move(b)}; }
  static StepOutput bottom() { return {Kind::bottom, {}}; }
  static StepOutput ack() { return {Kind::ack, {}}; }
  bool has_block() const { return kind == Kind::block; }
  bool operator==(const StepOutput&) const = default;
};

enum class SwitchKind { time_mod, ciphertext_driven };

struct SwitchRule {
  SwitchKind kind = SwitchKind::time_mod;
  int ell = 1;
  // time_mod offset: mode ((t - 1 + phase) mod ell) + 1.
  int phase = 0;
};

// Public S4 data an adversary may use.
struct S4Public {
  std::uint32_t q = 0;
  std::size_t n = 0;
  int n0 = 0;
  SwitchRule rule;
  std::vector<FieldMatrix> Q, E, B;
  FieldMatrix M;
};

struct PublicInfo {
  SchemeId id = SchemeId::cbc;
  Delays delays;
  BlockSpace space = BlockSpace::bits(16);
  BlockSpace iv_space = BlockSpace::bits(16);
  std::optional<NilpotentMap> f;         // MDCBC / MCFB feedback map
  std::shared_ptr<const S4Public> s4;    // S4 only
};

// Encryption-side state machine. start() runs the initial step (t = 0 for the
// plain encryptor, t = d for the synchronized one); each step() consumes one
// plaintext block; stop() handles the stop token.
class Encryptor {
 public:
  virtual ~Encryptor() = default;
  virtual StepOutput start() = 0;
  virtual StepOutput step(const Block& p) = 0;
  virtual StepOutput stop() = 0;
  // Ciphertext computed from the most recent plaintext (emitted now or later).
  virtual std::optional<Block> last_computed() const = 0;
  // Transmitter state aligned with the receiver state (see Scheme::state_error).
  virtual Block aligned_state() const = 0;
  virtual std::unique_ptr<Encryptor> clone() const = 0;
};

class Decryptor {
 public:
  virtual ~Decryptor() = default;
  // nullopt stands for a bottom symbol on the channel.
  virtual StepOutput step(const std::optional<Block>& c) = 0;
  virtual Block state() const = 0;
  virtual std::unique_ptr<Decryptor> clone() const = 0;
};

// Keyed, immutable instance; all mutable state lives in Encryptor/Decryptor.
class Scheme {
 public:
  virtual ~Scheme() = default;
  virtual SchemeId id() const = 0;
  virtual const PublicInfo& public_info() const = 0;
  const Delays& delays() const { return public_info().delays; }
  const BlockSpace& space() const { return public_info().space; }
  const BlockSpace& iv_space() const { return public_info().iv_space; }

  virtual Block random_iv(DeterministicRng& rng) const { return iv_space().random(rng); }
  // rng supplies the hidden initial state (never transmitted).
  virtual std::unique_ptr<Encryptor> make_encryptor(const Block& iv, DeterministicRng& rng) const = 0;
  virtual std::unique_ptr<Decryptor> make_decryptor(const Block& iv, DeterministicRng& rng) const = 0;
  // Encryptor driven by the receiver update.
  virtual std::unique_ptr<Encryptor> make_sync_encryptor(const Block& iv,
                                                         DeterministicRng& rng) const = 0;

  // Receiver state minus aligned transmitter state; zero once synchronized.
  virtual Block state_error(const Encryptor& enc, const Decryptor& dec) const {
    return state_space().sub(dec.state(), enc.aligned_state());
  }
  virtual const BlockSpace& state_space() const { return space(); }
  // Receiver steps after the last corrupted block that may still be garbled.
  int resync_window() const { return std::max(delays().t_s, delays().t_c) + delays().d; }
};

}  // namespace s4
