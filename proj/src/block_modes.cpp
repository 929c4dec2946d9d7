#include "s4/block_modes.hpp"

#include <stdexcept>

namespace s4 {

std::string scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::s4: return "s4";
    case SchemeId::cbc: return "cbc";
    case SchemeId::cfb: return "cfb";
    case SchemeId::dcbc: return "dcbc";
    case SchemeId::mdcbc: return "mdcbc";
    case SchemeId::mcfb: return "mcfb";
  }
  return "?";
}

SchemeId scheme_from_name(const std::string& name) {
  for (auto id : all_schemes())
    if (scheme_name(id) == name) return id;
  throw std::invalid_argument("unknown scheme: " + name);
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> ids = {SchemeId::s4,   SchemeId::cbc,   SchemeId::cfb,
                                            SchemeId::dcbc, SchemeId::mdcbc, SchemeId::mcfb};
  return ids;
}

namespace {

struct ModeCore {
  SchemeId id;
  BlockPermutation bp;
  NilpotentMap f;  // zero map for CBC/CFB/DCBC
  BlockSpace space;
};

std::uint64_t one(const Block& b) { return b.at(0); }

// Plain (sync == false) and receiver-driven (sync == true) encryptors.
class ModeEnc : public Encryptor {
 public:
  ModeEnc(std::shared_ptr<const ModeCore> core, std::uint64_t iv, std::uint64_t hidden, bool sync)
      : k_(std::move(core)), iv_(iv), hidden_(hidden), sync_(sync) {}

  StepOutput start() override {
    if (started_) throw std::logic_error("encryptor already started");
    started_ = true;
    const auto& E = k_->bp;
    switch (k_->id) {
      case SchemeId::cbc: s_ = iv_; return StepOutput::bottom();
      case SchemeId::cfb: s_ = E.encrypt(iv_); return StepOutput::bottom();
      case SchemeId::mcfb: s_ = E.encrypt(iv_) ^ k_->f.apply(hidden_); return StepOutput::bottom();
      case SchemeId::dcbc:
        prev_ = iv_;
        s_ = iv_;
        pending_ = iv_;
        return sync_ ? StepOutput::of({iv_}) : StepOutput::bottom();
      case SchemeId::mdcbc:
        prev_ = hidden_;
        s_ = iv_ ^ k_->f.apply(hidden_);
        pending_ = iv_;
        return sync_ ? StepOutput::of({iv_}) : StepOutput::bottom();
      default: break;
    }
    throw std::logic_error("not a block mode");
  }

  StepOutput step(const Block& pb) override {
    if (!started_) throw std::logic_error("encryptor stepped before start");
    if (stopped_) throw std::logic_error("encryptor stepped after stop");
    k_->space.require(pb);
    const std::uint64_t p = one(pb);
    const auto& E = k_->bp;
    std::uint64_t c = 0;
    switch (k_->id) {
      case SchemeId::cbc:
        c = E.encrypt(s_ ^ p);
        s_ = c;
        break;
      case SchemeId::cfb:
        c = p ^ s_;
        s_ = E.encrypt(c);
        break;
      case SchemeId::mcfb:
        c = p ^ s_;
        s_ = E.encrypt(c) ^ k_->f.apply(s_);
        break;
      case SchemeId::dcbc:
      case SchemeId::mdcbc: {
        const std::uint64_t next = E.encrypt(s_ ^ p);
        const std::uint64_t s_next = next ^ k_->f.apply(s_);
        prev_ = s_;
        s_ = s_next;
        last_ = next;
        if (sync_) return StepOutput::of({next});
        const std::uint64_t out = pending_;
        pending_ = next;
        return StepOutput::of({out});
      }
      default: throw std::logic_error("not a block mode");
    }
    last_ = c;
    return StepOutput::of({c});
  }

  StepOutput stop() override {
    if (!started_ || stopped_) throw std::logic_error("stop out of order");
    stopped_ = true;
    const bool delayed = k_->id == SchemeId::dcbc || k_->id == SchemeId::mdcbc;
    if (delayed && !sync_) return StepOutput::of({pending_});
    return StepOutput::bottom();
  }

  std::optional<Block> last_computed() const override {
    if (!last_) return std::nullopt;
    return Block{*last_};
  }

  Block aligned_state() const override {
    const bool delayed = k_->id == SchemeId::dcbc || k_->id == SchemeId::mdcbc;
    return {delayed && !sync_ ? prev_ : s_};
  }

  std::unique_ptr<Encryptor> clone() const override { return std::make_unique<ModeEnc>(*this); }

 private:
  std::shared_ptr<const ModeCore> k_;
  std::uint64_t iv_, hidden_;
  bool sync_;
  bool started_ = false, stopped_ = false;
  std::uint64_t s_ = 0, prev_ = 0, pending_ = 0;
  std::optional<std::uint64_t> last_;
};

class ModeDec : public Decryptor {
 public:
  ModeDec(std::shared_ptr<const ModeCore> core, std::uint64_t iv, std::uint64_t hidden)
      : k_(std::move(core)), iv_(iv), s_(hidden) {}

  StepOutput step(const std::optional<Block>& cb) override {
    const auto& E = k_->bp;
    const SchemeId id = k_->id;
    const std::uint64_t t = t_++;
    if (t == 0) {
      if (id == SchemeId::cbc || id == SchemeId::dcbc) s_ = iv_;
      if (id == SchemeId::cfb) s_ = E.encrypt(iv_);
      if (id == SchemeId::mcfb) s_ = E.encrypt(iv_) ^ k_->f.apply(s_);
      return StepOutput::ack();
    }
    if (!cb) throw std::invalid_argument("decryptor expects a ciphertext block");
    k_->space.require(*cb);
    const std::uint64_t c = one(*cb);
    if (t == 1 && (id == SchemeId::dcbc || id == SchemeId::mdcbc)) {
      s_ = iv_ ^ k_->f.apply(s_);  // f is zero for DCBC
      return StepOutput::ack();
    }
    std::uint64_t p = 0;
    switch (id) {
      case SchemeId::cbc:
        p = E.decrypt(c) ^ s_;
        s_ = c;
        break;
      case SchemeId::dcbc:
      case SchemeId::mdcbc:
        p = E.decrypt(c) ^ s_;
        s_ = c ^ k_->f.apply(s_);
        break;
      case SchemeId::cfb:
      case SchemeId::mcfb:
        p = s_ ^ c;
        s_ = E.encrypt(c) ^ k_->f.apply(s_);
        break;
      default: throw std::logic_error("not a block mode");
    }
    return StepOutput::of({p});
  }

  Block state() const override { return {s_}; }
  std::unique_ptr<Decryptor> clone() const override { return std::make_unique<ModeDec>(*this); }

 private:
  std::shared_ptr<const ModeCore> k_;
  std::uint64_t iv_, s_;
  std::uint64_t t_ = 0;
};

class ModeScheme : public Scheme {
 public:
  ModeScheme(std::shared_ptr<const ModeCore> core, PublicInfo info)
      : core_(std::move(core)), info_(std::move(info)) {}

  SchemeId id() const override { return core_->id; }
  const PublicInfo& public_info() const override { return info_; }

  std::unique_ptr<Encryptor> make_encryptor(const Block& iv, DeterministicRng& rng) const override {
    iv_space().require(iv);
    return std::make_unique<ModeEnc>(core_, one(iv), one(space().random(rng)), false);
  }
  std::unique_ptr<Decryptor> make_decryptor(const Block& iv, DeterministicRng& rng) const override {
    iv_space().require(iv);
    return std::make_unique<ModeDec>(core_, one(iv), one(space().random(rng)));
  }
  std::unique_ptr<Encryptor> make_sync_encryptor(const Block& iv, DeterministicRng& rng) const override {
    iv_space().require(iv);
    return std::make_unique<ModeEnc>(core_, one(iv), one(space().random(rng)), true);
  }

 private:
  std::shared_ptr<const ModeCore> core_;
  PublicInfo info_;
};

}  // namespace

std::shared_ptr<const Scheme> make_mode(SchemeId id, const SecretKey& key, const ModeConfig& cfg,
                                        DeterministicRng& rng) {
  if (id == SchemeId::s4) throw std::invalid_argument("make_mode: s4 is not a block mode");
  const BlockSpace space = BlockSpace::bits(cfg.width);
  PublicInfo info;
  info.id = id;
  info.space = space;
  info.iv_space = space;
  NilpotentMap f = NilpotentMap::zero(cfg.width);
  switch (id) {
    case SchemeId::cbc:
    case SchemeId::cfb: info.delays = {0, 1, 1}; break;
    case SchemeId::dcbc: info.delays = {1, 1, 1}; break;
    case SchemeId::mdcbc:
    case SchemeId::mcfb: {
      NilpotentMap published = NilpotentMap::sample(cfg.width, cfg.n0, rng);
      if (cfg.hide_f) {
        auto secret = derive_rng(key, "f");
        f = NilpotentMap::sample(cfg.width, cfg.n0, secret);
      } else {
        f = published;
      }
      info.f = published;
      info.delays = id == SchemeId::mdcbc ? Delays{1, cfg.n0, 1} : Delays{0, cfg.n0, 1};
      break;
    }
    default: throw std::invalid_argument("unknown mode");
  }
  auto core = std::make_shared<const ModeCore>(ModeCore{id, BlockPermutation(key, cfg.width, cfg.rounds), f, space});
  return std::make_shared<ModeScheme>(std::move(core), std::move(info));
}

}  // namespace s4
