#include "s4/sync_channel.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "s4/s4_scheme.hpp"

namespace s4 {

ChannelModel ChannelModel::corrupt(std::set<std::uint64_t> idx, std::uint64_t seed) {
  ChannelModel c;
  c.kind = Kind::corrupt_blocks;
  c.indices = std::move(idx);
  c.seed = seed;
  return c;
}

ChannelModel ChannelModel::burst(std::uint64_t start, std::uint64_t length, std::uint64_t seed) {
  ChannelModel c;
  c.kind = Kind::resync_burst;
  c.burst_start = start;
  c.burst_length = length;
  c.seed = seed;
  return c;
}

bool ChannelModel::hits(std::uint64_t t) const {
  switch (kind) {
    case Kind::clean: return false;
    case Kind::corrupt_blocks: return indices.count(t) > 0;
    case Kind::resync_burst: return t >= burst_start && t < burst_start + burst_length;
  }
  return false;
}

std::optional<std::uint64_t> ChannelModel::last_hit() const {
  if (kind == Kind::corrupt_blocks && !indices.empty()) return *indices.rbegin();
  if (kind == Kind::resync_burst && burst_length > 0) return burst_start + burst_length - 1;
  return std::nullopt;
}

std::vector<std::uint64_t> SyncTrace::mismatch_steps() const {
  std::vector<std::uint64_t> out;
  for (auto& r : rows)
    if (r.plain_match && !*r.plain_match) out.push_back(r.t);
  return out;
}

S4Matrices f7_example_matrices() {
  const std::uint32_t q = 7;
  S4Matrices m;
  m.q = q;
  m.Q = {FieldMatrix(q, {{6, 1, 0}, {6, 1, 0}, {0, 0, 0}}), FieldMatrix(q, {{2, 5, 0}, {2, 5, 0}, {0, 0, 0}})};
  m.D = {FieldMatrix(q, {{6, 0, 2}, {6, 3, 3}, {0, 3, 2}}), FieldMatrix(q, {{0, 3, 5}, {2, 0, 4}, {5, 4, 6}})};
  m.A = {FieldMatrix(q, {{0, 2, 5}, {6, 1, 1}, {1, 0, 1}}), FieldMatrix(q, {{2, 6, 0}, {5, 0, 4}, {3, 1, 1}})};
  m.E = {FieldMatrix(q, {{0, 6, 0}, {0, 0, 2}, {5, 1, 0}}), FieldMatrix(q, {{3, 1, 0}, {1, 0, 1}, {0, 1, 2}})};
  m.L = {FieldMatrix(q, {{1, 1, 5}, {0, 3, 1}, {0, 1, 0}}), FieldMatrix(q, {{1, 6, 1}, {0, 0, 1}, {0, 1, 0}})};
  m.B = {FieldMatrix(q, {{0, 5, 2}, {3, 0, 1}, {0, 6, 0}}), FieldMatrix(q, {{1, 2, 0}, {0, 3, 1}, {6, 1, 0}})};
  m.F = {FieldMatrix(q, {{0, 1, 0}, {0, 2, 1}, {3, 0, 4}}), FieldMatrix(q, {{0, 3, 0}, {5, 0, 2}, {1, 0, 0}})};
  m.W = FieldMatrix(q, {{0, 1, 0}, {0, 2, 1}, {3, 0, 4}});
  m.M = FieldMatrix(q, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
  return m;
}

SwitchRule f7_example_rule() { return SwitchRule{SwitchKind::time_mod, 2, 1}; }

F7ExampleInit f7_example_init() {
  return {FieldVector(7, {2, 4, 1}), FieldVector(7, {0, 2, 4}), FieldVector(7, {0, 0, 0}),
          FieldVector(7, {1, 4, 4})};
}

ElementPermutation f7_example_permutation() {
  DeterministicRng rng(7);
  return derive_element_permutation(gen_key(128, rng), 7, "perm");
}

SyncTrace run_f7_example(std::size_t blocks, std::uint64_t plain_seed) {
  return run_f7_example(blocks, plain_seed, f7_example_permutation());
}

SyncTrace run_f7_example(std::size_t blocks, std::uint64_t plain_seed, const ElementPermutation& perm) {
  auto params = std::make_shared<const S4Params>(params_from_matrices(f7_example_matrices(), perm));
  const F7ExampleInit init = f7_example_init();
  const SwitchRule rule = f7_example_rule();
  S4Encryptor enc(params, rule, init.s0, init.mem0, init.c0);
  S4Receiver dec(params, rule, init.s_hat1, init.mem0, init.c0);
  DeterministicRng rng(plain_seed);

  SyncTrace trace;
  trace.dims = 3;
  trace.d = 1;
  std::vector<FieldVector> plain{FieldVector()};  // 1-based
  enc.start();
  dec.decrypt_step(nullptr);
  for (std::size_t t = 1; t <= blocks; ++t) {
    plain.push_back(random_vector(7, 3, rng));
    const FieldVector c = enc.step(plain.back());
    const auto out = dec.decrypt_step(&c);
    TraceRow row;
    row.t = t;
    const FieldVector e = error_vector(enc, dec);
    row.e.assign(e.v.begin(), e.v.end());
    row.synced = e.is_zero();
    if (out) row.plain_match = *out == plain[t - 1];
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

SyncTrace run_channel_sim(const Scheme& scheme, const ChannelModel& channel, std::size_t n_blocks,
                          std::uint64_t seed) {
  if (auto last = channel.last_hit(); last && *last >= n_blocks)
    throw std::invalid_argument("channel corrupts past the end of the stream");
  DeterministicRng rng(seed);
  DeterministicRng noise(channel.seed ^ 0x5bd1e995ULL);
  const BlockSpace& sp = scheme.space();
  const Block iv = scheme.random_iv(rng);
  DeterministicRng enc_hidden = rng.split(), dec_hidden = rng.split();
  auto enc = scheme.make_encryptor(iv, enc_hidden);
  auto dec = scheme.make_decryptor(iv, dec_hidden);
  const int d = scheme.delays().d;

  SyncTrace trace;
  trace.dims = scheme.state_space().symbols();
  trace.d = d;
  std::vector<Block> plain{Block()};
  const StepOutput first = enc->start();
  dec->step(first.has_block() ? std::optional<Block>(first.block) : std::nullopt);
  for (std::size_t t = 1; t <= n_blocks; ++t) {
    plain.push_back(sp.random(rng));
    StepOutput c = enc->step(plain.back());
    if (!c.has_block()) throw std::logic_error("encryptor emitted no block");
    if (channel.hits(t)) {
      Block bad = sp.random(noise);
      while (bad == c.block) bad = sp.random(noise);
      c.block = bad;
    }
    const StepOutput out = dec->step(c.block);
    TraceRow row;
    row.t = t;
    row.e = scheme.state_error(*enc, *dec);
    row.synced = true;
    for (auto x : row.e) row.synced = row.synced && x == 0;
    if (out.has_block() && t >= static_cast<std::size_t>(d) + 1) row.plain_match = out.block == plain[t - d];
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

void emit_csv(const SyncTrace& trace, std::ostream& os) {
  os << 't';
  for (std::size_t i = 0; i < trace.dims; ++i) os << ",e_" << i;
  os << ",synced,plain_match\n";
  for (auto& r : trace.rows) {
    os << r.t;
    for (auto x : r.e) os << ',' << x;
    os << ',' << (r.synced ? 1 : 0) << ',';
    if (r.plain_match) os << (*r.plain_match ? 1 : 0);
    else os << "na";
    os << '\n';
  }
}

void emit_csv(const SyncTrace& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  emit_csv(trace, f);
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace s4
