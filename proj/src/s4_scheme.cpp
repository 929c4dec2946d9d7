#include "s4/s4_scheme.hpp"

#include <stdexcept>

namespace s4 {

namespace {

class S4Enc : public Encryptor {
 public:
  S4Enc(S4Encryptor e, BlockSpace sp) : e_(std::move(e)), sp_(sp) {}

  StepOutput start() override {
    e_.start();
    return StepOutput::bottom();
  }
  StepOutput step(const Block& p) override {
    return StepOutput::of(sp_.from_vector(e_.step(sp_.to_vector(p))));
  }
  StepOutput stop() override { return StepOutput::of(sp_.from_vector(e_.stop())); }
  std::optional<Block> last_computed() const override {
    if (e_.clock() == 0) return std::nullopt;
    return sp_.from_vector(e_.pending());
  }
  Block aligned_state() const override { return sp_.from_vector(e_.prev_state()); }
  std::unique_ptr<Encryptor> clone() const override { return std::make_unique<S4Enc>(*this); }

  const S4Encryptor& inner() const { return e_; }

 private:
  S4Encryptor e_;
  BlockSpace sp_;
};

class S4SyncEnc : public Encryptor {
 public:
  S4SyncEnc(S4Receiver r, BlockSpace sp) : r_(std::move(r)), sp_(sp) {}

  StepOutput start() override {
    last_ = sp_.from_vector(r_.sync_start());
    return StepOutput::of(*last_);
  }
  StepOutput step(const Block& p) override {
    if (stopped_) throw std::logic_error("synchronized encryptor stepped after stop");
    last_ = sp_.from_vector(r_.sync_step(sp_.to_vector(p)));
    computed_ = true;
    return StepOutput::of(*last_);
  }
  StepOutput stop() override {
    stopped_ = true;
    return StepOutput::bottom();
  }
  std::optional<Block> last_computed() const override {
    return computed_ ? last_ : std::nullopt;
  }
  Block aligned_state() const override { return sp_.from_vector(r_.state()); }
  std::unique_ptr<Encryptor> clone() const override { return std::make_unique<S4SyncEnc>(*this); }

 private:
  S4Receiver r_;
  BlockSpace sp_;
  std::optional<Block> last_;
  bool computed_ = false, stopped_ = false;
};

class S4Dec : public Decryptor {
 public:
  S4Dec(S4Receiver r, BlockSpace sp) : r_(std::move(r)), sp_(sp) {}

  StepOutput step(const std::optional<Block>& c) override {
    std::optional<FieldVector> out;
    if (c) {
      const FieldVector v = sp_.to_vector(*c);
      out = r_.decrypt_step(&v);
    } else {
      out = r_.decrypt_step(nullptr);
    }
    return out ? StepOutput::of(sp_.from_vector(*out)) : StepOutput::ack();
  }
  Block state() const override { return sp_.from_vector(r_.state()); }
  std::unique_ptr<Decryptor> clone() const override { return std::make_unique<S4Dec>(*this); }

 private:
  S4Receiver r_;
  BlockSpace sp_;
};

}  // namespace

S4Scheme::S4Scheme(std::shared_ptr<const S4Params> params, SwitchRule rule)
    : params_(std::move(params)), rule_(rule) {
  const S4Params& p = *params_;
  if (rule_.ell != p.ell) throw std::invalid_argument("switch rule ell differs from parameter ell");
  info_.id = SchemeId::s4;
  info_.delays = Delays{1, p.sync_delay(), p.sync_delay()};
  info_.space = BlockSpace::field(p.q, p.n);
  info_.iv_space = BlockSpace::field(p.q, p.m0 + p.n);
  auto pub = std::make_shared<S4Public>();
  pub->q = p.q;
  pub->n = p.n;
  pub->n0 = p.n0;
  pub->rule = rule_;
  pub->Q = p.Q;
  pub->E = p.E;
  pub->B = p.B;
  pub->M = p.M;
  info_.s4 = std::move(pub);
}

std::pair<FieldVector, FieldVector> S4Scheme::split_iv(const Block& iv) const {
  iv_space().require(iv);
  const S4Params& p = *params_;
  FieldVector mem(p.q, p.m0), c0(p.q, p.n);
  for (std::size_t i = 0; i < p.m0; ++i) mem.v[i] = static_cast<Elem>(iv[i]);
  for (std::size_t i = 0; i < p.n; ++i) c0.v[i] = static_cast<Elem>(iv[p.m0 + i]);
  return {mem, c0};
}

Block S4Scheme::make_iv(const FieldVector& mem0, const FieldVector& c0) const {
  Block iv(mem0.v.begin(), mem0.v.end());
  iv.insert(iv.end(), c0.v.begin(), c0.v.end());
  iv_space().require(iv);
  return iv;
}

std::unique_ptr<Encryptor> S4Scheme::encryptor_from_values(const Block& iv, const FieldVector& s0) const {
  auto [mem, c0] = split_iv(iv);
  return std::make_unique<S4Enc>(S4Encryptor(params_, rule_, s0, mem, c0), space());
}

std::unique_ptr<Decryptor> S4Scheme::decryptor_from_values(const Block& iv, const FieldVector& s_hat1) const {
  auto [mem, c0] = split_iv(iv);
  return std::make_unique<S4Dec>(S4Receiver(params_, rule_, s_hat1, mem, c0), space());
}

std::unique_ptr<Encryptor> S4Scheme::sync_encryptor_from_values(const Block& iv,
                                                                const FieldVector& s_hat1) const {
  auto [mem, c0] = split_iv(iv);
  return std::make_unique<S4SyncEnc>(S4Receiver(params_, rule_, s_hat1, mem, c0), space());
}

std::unique_ptr<Encryptor> S4Scheme::make_encryptor(const Block& iv, DeterministicRng& rng) const {
  return encryptor_from_values(iv, random_vector(params_->q, params_->n, rng));
}

std::unique_ptr<Decryptor> S4Scheme::make_decryptor(const Block& iv, DeterministicRng& rng) const {
  return decryptor_from_values(iv, random_vector(params_->q, params_->n, rng));
}

std::unique_ptr<Encryptor> S4Scheme::make_sync_encryptor(const Block& iv, DeterministicRng& rng) const {
  return sync_encryptor_from_values(iv, random_vector(params_->q, params_->n, rng));
}

}  // namespace s4
