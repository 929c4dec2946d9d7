#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "s4/block_modes.hpp"
#include "s4/lorba_oracles.hpp"
#include "s4/scheme.hpp"

namespace s4 {

// Splice a second session onto the chaining value of the first.
std::shared_ptr<const Adversary> attack_dcbc_blockwise(OracleKind oracle);
// Two sessions under one chosen IV; compare the first data-dependent ciphertexts.
std::shared_ptr<const Adversary> attack_fixed_iv_collision(OracleKind oracle);
// Recompute the receiver state from the transcript and force equal cipher inputs.
std::shared_ptr<const Adversary> attack_mdcbc_se();
// Chosen IV, compare first ciphertexts through the projection that kills the hidden state.
std::shared_ptr<const Adversary> attack_mcfb_chosen_iv();
// Wait for the E and SE streams to agree, then inject differing plaintexts.
std::shared_ptr<const Adversary> attack_mixed_sync();

class CoinFlipAdversary : public Adversary {
 public:
  std::string name() const override { return "coin-flip"; }
  int guess(OracleAccess&, DeterministicRng& rng) const override { return rng.bit(); }
};

class SilentAdversary : public Adversary {
 public:
  std::string name() const override { return "silent"; }
  int guess(OracleAccess&, DeterministicRng&) const override { return 0; }
};

struct AttackEntry {
  std::string name;
  // Oracle choices under which the attack applies; empty = inapplicable.
  std::function<std::vector<OracleKind>(SchemeId, const GameModel&)> variants;
  std::function<std::shared_ptr<const Adversary>(OracleKind)> make;
};

const std::vector<AttackEntry>& attack_registry();
const AttackEntry& attack_by_name(const std::string& name);  // throws std::invalid_argument

struct SuiteConfig {
  S4Shape s4;
  ModeConfig mode;
};

SchemeFactory scheme_factory(SchemeId id, const SuiteConfig& cfg = {});

enum class Verdict { break_found, secure_so_far, inconclusive };
std::string verdict_name(Verdict v);

inline constexpr double kBreakThreshold = 0.3;
inline constexpr double kSecureThreshold = 0.15;

Verdict classify(const std::vector<ExperimentReport>& reports);

// Expected grid: true where the cell is marked secure.
bool table1_expects_secure(SchemeId id, const GameModel& model);
const std::vector<SchemeId>& table1_rows();

struct CellResult {
  SchemeId scheme = SchemeId::cbc;
  std::string model;
  std::vector<ExperimentReport> reports;
  Verdict verdict = Verdict::inconclusive;
  bool expected_secure = false;

  bool agrees() const {
    return expected_secure ? verdict == Verdict::secure_so_far : verdict == Verdict::break_found;
  }
};

CellResult run_cell(SchemeId id, const GameModel& model, std::uint64_t trials, std::uint64_t seed,
                                 const SuiteConfig& cfg = {});
std::vector<CellResult> run_table1(std::uint64_t trials, std::uint64_t seed, const SuiteConfig& cfg = {});
std::string render_table1(const std::vector<CellResult>& cells);

}  // namespace s4
