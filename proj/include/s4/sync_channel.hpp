#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "s4/prp_family.hpp"
#include "s4/s4_cipher.hpp"
#include "s4/scheme.hpp"

namespace s4 {

// Whole-block corruption: a hit block is replaced by a different uniform block.
struct ChannelModel {
  enum class Kind { clean, corrupt_blocks, resync_burst };
  Kind kind = Kind::clean;
  std::set<std::uint64_t> indices;  // corrupt_blocks: channel positions t of c(t)
  std::uint64_t burst_start = 0, burst_length = 0;
  std::uint64_t seed = 0;

  static ChannelModel clean() { return {}; }
  static ChannelModel corrupt(std::set<std::uint64_t> idx, std::uint64_t seed = 0);
  static ChannelModel burst(std::uint64_t start, std::uint64_t length, std::uint64_t seed = 0);

  bool hits(std::uint64_t t) const;
  std::optional<std::uint64_t> last_hit() const;
};

struct TraceRow {
  std::uint64_t t = 0;
  std::vector<std::uint64_t> e;    // state error after step t
  bool synced = false;             // e == 0
  std::optional<bool> plain_match;  // receiver output at step t vs p(t - d); empty on Ack
};

struct SyncTrace {
  std::size_t dims = 0;
  int d = 0;
  std::vector<TraceRow> rows;

  std::vector<std::uint64_t> mismatch_steps() const;
};

// Verbatim printed F7 example; the permutation defaults to one keyed from a fixed key.
S4Matrices f7_example_matrices();
SwitchRule f7_example_rule();  // t = 1 uses the second printed mode
struct F7ExampleInit {
  FieldVector s0, s_hat1, mem0, c0;
};
F7ExampleInit f7_example_init();
ElementPermutation f7_example_permutation();

SyncTrace run_f7_example(std::size_t blocks = 12, std::uint64_t plain_seed = 1);
SyncTrace run_f7_example(std::size_t blocks, std::uint64_t plain_seed, const ElementPermutation& perm);

// n_blocks plaintexts p(1..n_blocks); row t covers channel position t.
SyncTrace run_channel_sim(const Scheme& scheme, const ChannelModel& channel, std::size_t n_blocks,
                          std::uint64_t seed);

void emit_csv(const SyncTrace& trace, std::ostream& os);
void emit_csv(const SyncTrace& trace, const std::string& path);

}  // namespace s4
