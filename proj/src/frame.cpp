#include "s4/frame.hpp"

#include <algorithm>
#include <stdexcept>

namespace s4 {

namespace {
const char kMagic[4] = {'S', '4', 'S', '1'};

void put(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Reader {
  const std::vector<std::uint8_t>& b;
  std::size_t pos = 0;
  std::uint64_t get(int bytes) {
    if (b.size() - pos < static_cast<std::size_t>(bytes)) throw FrameError("truncated frame");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v = (v << 8) | b[pos++];
    return v;
  }
};

void require_shape(const S4Scheme& scheme) {
  const auto& p = scheme.params();
  if (p.q < 256 || p.q > 65536) throw std::invalid_argument("byte framing needs 256 <= q <= 65536");
  if (p.n > 0xffff) throw std::invalid_argument("block too wide for framing");
}
}  // namespace

std::vector<std::uint8_t> Frame::encode() const {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put(out, q, 4);
  put(out, n, 2);
  put(out, dummies, 2);
  put(out, payload_length, 8);
  put(out, blocks.size(), 4);
  for (auto x : iv) put(out, x, 2);
  for (auto& blk : blocks)
    for (auto x : blk) put(out, x, 2);
  return out;
}

Frame Frame::decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) throw FrameError("bad magic");
  Reader r{bytes, 4};
  Frame f;
  f.q = static_cast<std::uint32_t>(r.get(4));
  f.n = static_cast<std::uint16_t>(r.get(2));
  f.dummies = static_cast<std::uint16_t>(r.get(2));
  f.payload_length = r.get(8);
  const std::uint64_t count = r.get(4);
  if (f.q < 256 || f.q > 65536 || f.n == 0) throw FrameError("bad frame header");
  const std::uint64_t need = (2 * f.n + count * f.n) * 2;
  if (bytes.size() - r.pos != need) throw FrameError("frame length does not match header");
  auto read_block = [&](std::size_t len) {
    Block b(len);
    for (auto& x : b) {
      x = r.get(2);
      if (x >= f.q) throw FrameError("element out of range");
    }
    return b;
  };
  f.iv = read_block(2 * f.n);
  for (std::uint64_t i = 0; i < count; ++i) f.blocks.push_back(read_block(f.n));
  return f;
}

int dummy_blocks(const Scheme& scheme) {
  return std::max(scheme.delays().t_s, scheme.delays().t_c) - 1;
}

Frame encrypt_bytes(const S4Scheme& scheme, const std::vector<std::uint8_t>& data, DeterministicRng& rng) {
  require_shape(scheme);
  const BlockSpace& sp = scheme.space();
  const std::size_t n = sp.symbols();
  Frame f;
  f.q = scheme.params().q;
  f.n = static_cast<std::uint16_t>(n);
  f.dummies = static_cast<std::uint16_t>(dummy_blocks(scheme));
  f.payload_length = data.size();
  f.iv = scheme.random_iv(rng);
  DeterministicRng hidden = rng.split();
  auto enc = scheme.make_encryptor(f.iv, hidden);

  auto emit = [&](const StepOutput& o) {
    if (o.has_block()) f.blocks.push_back(o.block);
  };
  emit(enc->start());
  for (int i = 0; i < f.dummies; ++i) emit(enc->step(sp.random(rng)));
  for (std::size_t off = 0; off < data.size(); off += n) {
    Block p(n, 0);
    for (std::size_t i = 0; i < n && off + i < data.size(); ++i) p[i] = data[off + i];
    emit(enc->step(p));
  }
  for (int i = 0; i < scheme.delays().d; ++i) emit(enc->stop());
  return f;
}

std::vector<std::uint8_t> decrypt_bytes(const S4Scheme& scheme, const Frame& frame, DeterministicRng& rng) {
  require_shape(scheme);
  const BlockSpace& sp = scheme.space();
  if (frame.q != scheme.params().q || frame.n != sp.symbols()) throw FrameError("frame does not match key shape");
  if (!scheme.iv_space().contains(frame.iv)) throw FrameError("bad IV");
  const std::size_t n = sp.symbols();
  auto dec = scheme.make_decryptor(frame.iv, rng);

  std::vector<Block> plain;
  dec->step(std::nullopt);
  for (auto& c : frame.blocks) {
    const StepOutput o = dec->step(c);
    if (o.has_block()) plain.push_back(o.block);
  }
  const std::uint64_t data_blocks = (frame.payload_length + n - 1) / n;
  if (plain.size() != frame.dummies + data_blocks) throw FrameError("block count does not match payload length");

  std::vector<std::uint8_t> out;
  out.reserve(frame.payload_length);
  for (std::size_t b = frame.dummies; b < plain.size(); ++b)
    for (std::size_t i = 0; i < n && out.size() < frame.payload_length; ++i)
      out.push_back(static_cast<std::uint8_t>(plain[b][i] & 0xff));  // garbled elements may exceed a byte
  return out;
}

}  // namespace s4
