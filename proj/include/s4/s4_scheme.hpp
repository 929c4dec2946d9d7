#pragma once

#include <memory>

#include "s4/s4_cipher.hpp"
#include "s4/scheme.hpp"

namespace s4 {

// S4 behind the uniform scheme interface. IV blocks hold mem(0) followed by c(0).
class S4Scheme : public Scheme {
 public:
  S4Scheme(std::shared_ptr<const S4Params> params, SwitchRule rule);

  SchemeId id() const override { return SchemeId::s4; }
  const PublicInfo& public_info() const override { return info_; }

  std::unique_ptr<Encryptor> make_encryptor(const Block& iv, DeterministicRng& rng) const override;
  std::unique_ptr<Decryptor> make_decryptor(const Block& iv, DeterministicRng& rng) const override;
  std::unique_ptr<Encryptor> make_sync_encryptor(const Block& iv, DeterministicRng& rng) const override;

  // Explicit hidden initial states.
  std::unique_ptr<Encryptor> encryptor_from_values(const Block& iv, const FieldVector& s0) const;
  std::unique_ptr<Decryptor> decryptor_from_values(const Block& iv, const FieldVector& s_hat1) const;
  std::unique_ptr<Encryptor> sync_encryptor_from_values(const Block& iv, const FieldVector& s_hat1) const;

  const S4Params& params() const { return *params_; }
  std::shared_ptr<const S4Params> shared_params() const { return params_; }
  const SwitchRule& rule() const { return rule_; }
  Block make_iv(const FieldVector& mem0, const FieldVector& c0) const;

 private:
  std::pair<FieldVector, FieldVector> split_iv(const Block& iv) const;

  std::shared_ptr<const S4Params> params_;
  SwitchRule rule_;
  PublicInfo info_;
};

// Default switching for generated parameters.
inline SwitchRule default_rule(int ell) { return SwitchRule{SwitchKind::time_mod, ell, 0}; }

}  // namespace s4
