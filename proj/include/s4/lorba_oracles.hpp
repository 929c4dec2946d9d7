#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s4/prp_family.hpp"
#include "s4/rng.hpp"
#include "s4/scheme.hpp"

namespace s4 {

enum class OracleKind { E, SE };
std::string oracle_name(OracleKind k);

struct GameModel {
  std::string name;   // shell-safe flag value
  std::string label;  // table column heading
  bool chosen_iv = false;
  bool has_e = false;
  bool has_se = false;

  bool allows(OracleKind k) const { return k == OracleKind::E ? has_e : has_se; }
  bool mixed() const { return has_e && has_se; }
};

// riv-e, iv-e, riv-se, iv-se, riv-mixed, iv-mixed in table-column order.
const std::vector<GameModel>& all_models();
const GameModel& model_by_name(const std::string& name);  // throws std::invalid_argument

inline constexpr std::uint64_t kQueryBudget = 10000;

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("query budget exceeded") {}
};

struct SessionInfo {
  int id = -1;
  OracleKind kind = OracleKind::E;
  Block iv;
  StepOutput initial;  // output of the opening step
};

// Everything an adversary may touch. The hidden bit is not reachable from here.
class OracleAccess {
 public:
  virtual ~OracleAccess() = default;
  virtual const PublicInfo& info() const = 0;
  virtual const GameModel& model() const = 0;
  // chosen_iv must be present iff the model is a chosen-IV model.
  virtual SessionInfo open_session(OracleKind kind, const std::optional<Block>& chosen_iv = std::nullopt) = 0;
  virtual StepOutput query(int session, const Block& p0, const Block& p1) = 0;
  virtual std::uint64_t calls() const = 0;
};

// Adversaries are immutable; all per-trial state is local to guess().
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual int guess(OracleAccess& oracle, DeterministicRng& rng) const = 0;
};

// Gen: builds a freshly keyed scheme for one trial.
using SchemeFactory = std::function<std::shared_ptr<const Scheme>(DeterministicRng&)>;

struct QueryRef {
  OracleKind kind = OracleKind::E;
  int session = -1;
  int tau = 0;  // 1-based query index within the session
  bool operator==(const QueryRef&) const = default;
};

// Two queries whose ciphertexts coincide under the real bit but not under its
// complement (each query's complement ciphertext comes from a shadow copy of
// the session stepped with the other plaintext).
struct CollisionEvent {
  QueryRef first, second;
  Block real_first, real_second;
  Block shadow_first, shadow_second;
  bool operator==(const CollisionEvent&) const = default;
  bool predicate_holds() const { return real_first == real_second && shadow_first != shadow_second; }
};

struct TrialOutcome {
  int b = 0;
  int guess = 0;
  bool success = false;
  bool budget_exceeded = false;
  std::uint64_t calls = 0;
  std::vector<CollisionEvent> collisions;
};

struct TrialOptions {
  bool log_collisions = true;
  std::uint64_t budget = kQueryBudget;
};

// One experiment: Gen, hidden bit (forced or uniform), adversary run, success bit.
TrialOutcome run_trial(const SchemeFactory& gen, const GameModel& model, const Adversary& adv,
                       std::uint64_t trial_seed, std::optional<int> forced_b = std::nullopt,
                       const TrialOptions& opt = {});

// 1 iff the adversary guessed the uniformly drawn bit.
int eval(const SchemeFactory& gen, const GameModel& model, const Adversary& adv, DeterministicRng& rng);

struct Interval {
  double low = 0, high = 1;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);
// Advantage interval |2p - 1| induced by an interval on p.
Interval advantage_interval(const Interval& p);

struct ExperimentReport {
  std::string adversary, scheme, model;
  std::uint64_t trials = 0, successes = 0;
  double advantage = 0, ci_low = 0, ci_high = 0;
  std::uint64_t collision_events = 0;
  std::uint64_t budget_failures = 0;
  std::vector<std::pair<std::uint64_t, CollisionEvent>> collision_sample;  // (trial, event)

  std::string json_line() const;
};

ExperimentReport make_report(std::string adversary, std::string scheme, std::string model,
                             std::uint64_t trials, std::uint64_t successes);

// Trial i uses stream_seed(seed, i) and hidden bit i & 1.
ExperimentReport estimate_advantage(const SchemeFactory& gen, const GameModel& model, const Adversary& adv,
                                    std::uint64_t trials, std::uint64_t seed, const std::string& scheme_label);
ExperimentReport estimate_advantage_serial(const SchemeFactory& gen, const GameModel& model,
                                           const Adversary& adv, std::uint64_t trials, std::uint64_t seed,
                                           const std::string& scheme_label);
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

// Re-runs a trial and checks that it logs exactly the same events, each
// satisfying its defining predicate.
bool replay_collisions(const SchemeFactory& gen, const GameModel& model, const Adversary& adv,
                       std::uint64_t seed, std::uint64_t trial, const std::vector<CollisionEvent>& logged);

// ----- permutation-swap harness -----

struct S4Shape {
  std::uint32_t q = 257;
  std::size_t n = 4;
  int ell = 2;
  int k_bits = 128;
};

// Built for one trial: S4 keyed from a fresh key, with the entrywise
// permutation drawn either from the keyed family or uniformly.
class PrpSwapWorld {
 public:
  virtual ~PrpSwapWorld() = default;
  // Left-or-right game against the world's S4 instance; 1 iff b' = b.
  virtual int lr_game(const Adversary& adv, const GameModel& model, DeterministicRng& rng) = 0;
  // Harness sanity hooks; a real distinguisher only sees lr_game.
  virtual const ElementPermutation& inspect_permutation() const = 0;
  virtual const SecretKey& inspect_key() const = 0;
};

class PrpSwapDistinguisher {
 public:
  virtual ~PrpSwapDistinguisher() = default;
  virtual std::string name() const = 0;
  virtual int distinguish(PrpSwapWorld& world, DeterministicRng& rng) const = 0;
};

// Wraps an LR adversary: outputs 1 iff it wins the game.
class GameDistinguisher : public PrpSwapDistinguisher {
 public:
  GameDistinguisher(std::shared_ptr<const Adversary> adv, GameModel model)
      : adv_(std::move(adv)), model_(std::move(model)) {}
  std::string name() const override { return "game:" + adv_->name(); }
  int distinguish(PrpSwapWorld& world, DeterministicRng& rng) const override {
    return world.lr_game(*adv_, model_, rng);
  }

 private:
  std::shared_ptr<const Adversary> adv_;
  GameModel model_;
};

class ConstantDistinguisher : public PrpSwapDistinguisher {
 public:
  std::string name() const override { return "constant-one"; }
  int distinguish(PrpSwapWorld&, DeterministicRng&) const override { return 1; }
};

struct PrpSwapReport {
  std::string distinguisher;
  std::uint64_t trials = 0;
  std::uint64_t keyed_trials = 0, keyed_ones = 0;
  std::uint64_t uniform_trials = 0, uniform_ones = 0;
  double advantage = 0, ci_low = 0, ci_high = 0;
};

// Trial i: coin (i >> 1) & 1 selects keyed (1) or uniform (0) permutation;
// the LR bit inside lr_game is i & 1.
PrpSwapReport prp_swap_experiment(const PrpSwapDistinguisher& d, const S4Shape& shape, std::uint64_t trials,
                                  std::uint64_t seed);

}  // namespace s4
