#include "s4/lorba_oracles.hpp"

#include <cmath>
#include <exception>
#include <map>

#include <json.hpp>

#include "s4/s4_scheme.hpp"

namespace s4 {

std::string oracle_name(OracleKind k) { return k == OracleKind::E ? "E" : "SE"; }

const std::vector<GameModel>& all_models() {
  static const std::vector<GameModel> models = {
      {"riv-e", "($IV,E)", false, true, false},     {"iv-e", "(IV,E)", true, true, false},
      {"riv-se", "($IV,SE)", false, false, true},   {"iv-se", "(IV,SE)", true, false, true},
      {"riv-mixed", "($IV,E&SE)", false, true, true}, {"iv-mixed", "LORBACPA+", true, true, true},
  };
  return models;
}

const GameModel& model_by_name(const std::string& name) {
  for (auto& m : all_models())
    if (m.name == name) return m;
  throw std::invalid_argument("unknown model: " + name);
}

namespace {

constexpr std::size_t kMaxEventsPerTrial = 64;

struct Session {
  SessionInfo info;
  std::unique_ptr<Encryptor> enc;
  int tau = 0;
};

struct Record {
  QueryRef ref;
  Block real, shadow;
};

class Game : public OracleAccess {
 public:
  Game(std::shared_ptr<const Scheme> scheme, const GameModel& model, int b, DeterministicRng hidden,
       const TrialOptions& opt)
      : scheme_(std::move(scheme)), model_(model), b_(b), hidden_(hidden), opt_(opt) {}

  const PublicInfo& info() const override { return scheme_->public_info(); }
  const GameModel& model() const override { return model_; }
  std::uint64_t calls() const override { return calls_; }

  SessionInfo open_session(OracleKind kind, const std::optional<Block>& chosen_iv) override {
    charge();
    if (!model_.allows(kind)) throw std::invalid_argument("oracle type not available in this model");
    if (chosen_iv.has_value() != model_.chosen_iv)
      throw std::invalid_argument(model_.chosen_iv ? "chosen-IV model needs an IV" : "random-IV model takes no IV");
    Session s;
    s.info.id = static_cast<int>(sessions_.size());
    s.info.kind = kind;
    s.info.iv = chosen_iv ? *chosen_iv : scheme_->random_iv(hidden_);
    scheme_->iv_space().require(s.info.iv);
    // Hidden initial state is drawn even when the IV is chosen.
    DeterministicRng local = hidden_.split();
    s.enc = kind == OracleKind::E ? scheme_->make_encryptor(s.info.iv, local)
                                  : scheme_->make_sync_encryptor(s.info.iv, local);
    s.info.initial = s.enc->start();
    sessions_.push_back(std::move(s));
    return sessions_.back().info;
  }

  StepOutput query(int session, const Block& p0, const Block& p1) override {
    charge();
    if (session < 0 || static_cast<std::size_t>(session) >= sessions_.size())
      throw std::invalid_argument("no such session");
    const auto& sp = scheme_->space();
    if (p0.size() != p1.size()) throw std::invalid_argument("plaintext blocks differ in length");
    sp.require(p0);
    sp.require(p1);
    Session& s = sessions_[session];
    const Block& chosen = b_ ? p1 : p0;
    const Block& other = b_ ? p0 : p1;
    std::optional<Block> shadow;
    if (opt_.log_collisions) {
      auto copy = s.enc->clone();
      copy->step(other);
      shadow = copy->last_computed();
    }
    StepOutput out = s.enc->step(chosen);
    ++s.tau;
    if (opt_.log_collisions) {
      auto real = s.enc->last_computed();
      if (real && shadow) log(Record{{s.info.kind, session, s.tau}, *real, *shadow});
    }
    return out;
  }

  std::vector<CollisionEvent> take_events() { return std::move(events_); }

 private:
  void charge() {
    if (++calls_ > opt_.budget) throw BudgetExceeded();
  }

  void log(Record r) {
    auto& bucket = by_real_[r.real];
    for (std::size_t idx : bucket) {
      const Record& o = records_[idx];
      if (o.shadow != r.shadow && events_.size() < kMaxEventsPerTrial)
        events_.push_back(CollisionEvent{o.ref, r.ref, o.real, r.real, o.shadow, r.shadow});
    }
    bucket.push_back(records_.size());
    records_.push_back(std::move(r));
  }

  std::shared_ptr<const Scheme> scheme_;
  const GameModel& model_;
  int b_;
  DeterministicRng hidden_;
  TrialOptions opt_;
  std::uint64_t calls_ = 0;
  std::vector<Session> sessions_;
  std::vector<Record> records_;
  std::map<Block, std::vector<std::size_t>> by_real_;
  std::vector<CollisionEvent> events_;
};

}  // namespace

TrialOutcome run_trial(const SchemeFactory& gen, const GameModel& model, const Adversary& adv,
                       std::uint64_t trial_seed_value, std::optional<int> forced_b, const TrialOptions& opt) {
  DeterministicRng rng(trial_seed_value);
  DeterministicRng gen_rng = rng.split();
  const int drawn = rng.bit();
  DeterministicRng hidden = rng.split();
  DeterministicRng adv_rng = rng.split();

  TrialOutcome out;
  out.b = forced_b ? (*forced_b & 1) : drawn;
  Game game(gen(gen_rng), model, out.b, hidden, opt);
  try {
    out.guess = adv.guess(game, adv_rng) & 1;
    out.success = out.guess == out.b;
  } catch (const BudgetExceeded&) {
    out.budget_exceeded = true;
    out.guess = 1 - out.b;
    out.success = false;
  }
  out.calls = game.calls();
  out.collisions = game.take_events();
  return out;
}

int eval(const SchemeFactory& gen, const GameModel& model, const Adversary& adv, DeterministicRng& rng) {
  return run_trial(gen, model, adv, rng.next()).success ? 1 : 0;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0, 1};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

Interval advantage_interval(const Interval& p) {
  const double a = std::fabs(2 * p.low - 1), b = std::fabs(2 * p.high - 1);
  if (p.low <= 0.5 && p.high >= 0.5) return {0.0, std::max(a, b)};
  return {std::min(a, b), std::max(a, b)};
}

std::string ExperimentReport::json_line() const {
  nlohmann::ordered_json j;
  j["adversary"] = adversary;
  j["scheme"] = scheme;
  j["model"] = model;
  j["trials"] = trials;
  j["successes"] = successes;
  j["advantage"] = advantage;
  j["ci_low"] = ci_low;
  j["ci_high"] = ci_high;
  return j.dump();
}

ExperimentReport make_report(std::string adversary, std::string scheme, std::string model,
                             std::uint64_t trials, std::uint64_t successes) {
  ExperimentReport r;
  r.adversary = std::move(adversary);
  r.scheme = std::move(scheme);
  r.model = std::move(model);
  r.trials = trials;
  r.successes = successes;
  if (trials) {
    r.advantage = std::fabs(2.0 * static_cast<double>(successes) / static_cast<double>(trials) - 1.0);
    const Interval a = advantage_interval(wilson_interval(successes, trials));
    r.ci_low = a.low;
    r.ci_high = a.high;
  }
  return r;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return stream_seed(seed, trial); }

namespace {

constexpr std::size_t kCollisionSample = 16;

ExperimentReport aggregate(const std::vector<TrialOutcome>& outcomes, const GameModel& model,
                           const Adversary& adv, const std::string& scheme_label) {
  std::uint64_t successes = 0;
  for (auto& o : outcomes) successes += o.success ? 1 : 0;
  ExperimentReport r = make_report(adv.name(), scheme_label, model.name, outcomes.size(), successes);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    r.budget_failures += outcomes[i].budget_exceeded ? 1 : 0;
    r.collision_events += outcomes[i].collisions.size();
    for (auto& e : outcomes[i].collisions)
      if (r.collision_sample.size() < kCollisionSample) r.collision_sample.emplace_back(i, e);
  }
  return r;
}

}  // namespace

ExperimentReport estimate_advantage_serial(const SchemeFactory& gen, const GameModel& model,
                                           const Adversary& adv, std::uint64_t trials, std::uint64_t seed,
                                           const std::string& scheme_label) {
  std::vector<TrialOutcome> outcomes(trials);
  for (std::uint64_t i = 0; i < trials; ++i)
    outcomes[i] = run_trial(gen, model, adv, trial_seed(seed, i), static_cast<int>(i & 1));
  return aggregate(outcomes, model, adv, scheme_label);
}

ExperimentReport estimate_advantage(const SchemeFactory& gen, const GameModel& model, const Adversary& adv,
                                    std::uint64_t trials, std::uint64_t seed, const std::string& scheme_label) {
  std::vector<TrialOutcome> outcomes(trials);
  std::exception_ptr failure;
  const std::int64_t n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      outcomes[i] = run_trial(gen, model, adv, trial_seed(seed, i), static_cast<int>(i & 1));
    } catch (...) {
#pragma omp critical(s4_trial_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return aggregate(outcomes, model, adv, scheme_label);
}

bool replay_collisions(const SchemeFactory& gen, const GameModel& model, const Adversary& adv,
                       std::uint64_t seed, std::uint64_t trial, const std::vector<CollisionEvent>& logged) {
  const TrialOutcome again = run_trial(gen, model, adv, trial_seed(seed, trial), static_cast<int>(trial & 1));
  if (again.collisions != logged) return false;
  for (auto& e : again.collisions)
    if (!e.predicate_holds()) return false;
  return true;
}

namespace {

class SwapWorld : public PrpSwapWorld {
 public:
  SwapWorld(const S4Shape& shape, bool keyed, int b, DeterministicRng& rng) : b_(b) {
    key_ = gen_key(shape.k_bits, rng);
    S4Params p = derive_params(key_, shape.q, shape.n, shape.ell, rng.next());
    if (!keyed) p.perm = sample_uniform_permutation(shape.q, rng);
    perm_ = p.perm;
    scheme_ = std::make_shared<S4Scheme>(std::make_shared<const S4Params>(std::move(p)), default_rule(shape.ell));
  }

  int lr_game(const Adversary& adv, const GameModel& model, DeterministicRng& rng) override {
    auto scheme = scheme_;
    SchemeFactory fixed = [scheme](DeterministicRng&) { return scheme; };
    TrialOptions opt;
    opt.log_collisions = false;
    return run_trial(fixed, model, adv, rng.next(), b_, opt).success ? 1 : 0;
  }
  const ElementPermutation& inspect_permutation() const override { return perm_; }
  const SecretKey& inspect_key() const override { return key_; }

 private:
  int b_;
  SecretKey key_;
  ElementPermutation perm_;
  std::shared_ptr<const Scheme> scheme_;
};

}  // namespace

PrpSwapReport prp_swap_experiment(const PrpSwapDistinguisher& d, const S4Shape& shape, std::uint64_t trials,
                                  std::uint64_t seed) {
  std::vector<int> out(trials, 0);
  std::exception_ptr failure;
  const std::int64_t n = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      DeterministicRng rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
      DeterministicRng world_rng = rng.split();
      DeterministicRng d_rng = rng.split();
      const bool keyed = (i >> 1) & 1;
      SwapWorld world(shape, keyed, static_cast<int>(i & 1), world_rng);
      out[i] = d.distinguish(world, d_rng) & 1;
    } catch (...) {
#pragma omp critical(s4_swap_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  PrpSwapReport r;
  r.distinguisher = d.name();
  r.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if ((i >> 1) & 1) {
      ++r.keyed_trials;
      r.keyed_ones += out[i];
    } else {
      ++r.uniform_trials;
      r.uniform_ones += out[i];
    }
  }
  if (r.keyed_trials == 0 || r.uniform_trials == 0) return r;
  const double p1 = double(r.keyed_ones) / double(r.keyed_trials);
  const double p0 = double(r.uniform_ones) / double(r.uniform_trials);
  const Interval w1 = wilson_interval(r.keyed_ones, r.keyed_trials);
  const Interval w0 = wilson_interval(r.uniform_ones, r.uniform_trials);
  // Newcombe's hybrid score interval for p1 - p0, folded to |p1 - p0|.
  const double diff = p1 - p0;
  const double lo = diff - std::sqrt((p1 - w1.low) * (p1 - w1.low) + (w0.high - p0) * (w0.high - p0));
  const double hi = diff + std::sqrt((w1.high - p1) * (w1.high - p1) + (p0 - w0.low) * (p0 - w0.low));
  r.advantage = std::fabs(diff);
  if (lo <= 0 && hi >= 0) {
    r.ci_low = 0;
    r.ci_high = std::max(-lo, hi);
  } else {
    r.ci_low = std::min(std::fabs(lo), std::fabs(hi));
    r.ci_high = std::max(std::fabs(lo), std::fabs(hi));
  }
  return r;
}

}  // namespace s4
