#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "s4/prp_family.hpp"
#include "s4/s4_scheme.hpp"

namespace s4 {

// Everything needed to rebuild a keyed S4 instance.
struct KeyFile {
  SecretKey key;
  std::uint32_t q = 257;
  std::size_t n = 4;
  int ell = 2;
  std::uint64_t public_seed = 0;
  SwitchRule rule;

  std::string to_json() const;
  static KeyFile from_json(const std::string& text);  // throws std::runtime_error
  void save(const std::string& path) const;
  static KeyFile load(const std::string& path);

  std::shared_ptr<const S4Scheme> scheme() const;
};

KeyFile generate_keyfile(int k_bits, std::uint32_t q, std::size_t n, int ell, SwitchKind kind,
                         DeterministicRng& rng);

}  // namespace s4
