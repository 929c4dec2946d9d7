#pragma once

#include <memory>

#include "s4/nilpotent_map.hpp"
#include "s4/prp_family.hpp"
#include "s4/scheme.hpp"

namespace s4 {

struct ModeConfig {
  int width = 16;
  int rounds = 4;
  int n0 = 3;  // index of the MDCBC/MCFB feedback map
  // Control setting: the real feedback map is secret and key-derived, and the
  // published one is an unrelated decoy.
  bool hide_f = false;
};

// rng supplies the public feedback map for MDCBC/MCFB.
std::shared_ptr<const Scheme> make_mode(SchemeId id, const SecretKey& key, const ModeConfig& cfg,
                                        DeterministicRng& rng);

}  // namespace s4
