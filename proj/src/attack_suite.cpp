#include "s4/attack_suite.hpp"

#include <sstream>
#include <stdexcept>

#include "s4/s4_cipher.hpp"
#include "s4/s4_scheme.hpp"

namespace s4 {

namespace {

Block block_of(const StepOutput& o) {
  if (!o.has_block()) throw std::logic_error("oracle returned no block where one was expected");
  return o.block;
}

SessionInfo open(OracleAccess& o, OracleKind kind, DeterministicRng& rng,
                 const std::optional<Block>& iv = std::nullopt) {
  if (!o.model().chosen_iv) return o.open_session(kind);
  return o.open_session(kind, iv ? *iv : o.info().iv_space.random(rng));
}

// Q_{sigma(len+1)} ... Q_{sigma(2)}: the public product an S4 adversary would
// try in place of a feedback-map power.
FieldMatrix s4_q_product(const S4Public& pub, int len) {
  FieldMatrix p = FieldMatrix::identity(pub.q, pub.n);
  for (int k = 2; k < 2 + len; ++k) {
    const int j = pub.rule.kind == SwitchKind::time_mod ? switch_index(pub.rule, static_cast<std::uint64_t>(k), nullptr)
                                                         : 1;
    p = pub.Q[j - 1] * p;
  }
  return p;
}

class Blockwise : public Adversary {
 public:
  explicit Blockwise(OracleKind k) : k_(k) {}
  std::string name() const override { return "dcbc-blockwise/" + oracle_name(k_); }

  int guess(OracleAccess& o, DeterministicRng& rng) const override {
    const BlockSpace& sp = o.info().space;
    const int a = open(o, k_, rng).id;
    const int b = open(o, k_, rng).id;
    const Block x = sp.random(rng);
    const Block ra1 = block_of(o.query(a, x, x));
    const Block p0 = sp.random(rng);
    const Block p1 = sp.add(p0, sp.random_nonzero(rng));
    const Block ra2 = block_of(o.query(a, p0, p1));
    const Block y = sp.random(rng);
    const Block rb1 = block_of(o.query(b, y, y));
    const Block spliced = sp.add(p0, sp.sub(ra1, rb1));
    const Block rb2 = block_of(o.query(b, spliced, spliced));
    return rb2 == ra2 ? 0 : 1;
  }

 private:
  OracleKind k_;
};

class FixedIv : public Adversary {
 public:
  explicit FixedIv(OracleKind k) : k_(k) {}
  std::string name() const override { return "fixed-iv-collision/" + oracle_name(k_); }

  int guess(OracleAccess& o, DeterministicRng& rng) const override {
    if (!o.model().chosen_iv) return 0;
    const BlockSpace& sp = o.info().space;
    const Block iv = o.info().iv_space.random(rng);
    const int a = open(o, k_, rng, iv).id;
    const int b = open(o, k_, rng, iv).id;
    Block pb = sp.random_nonzero(rng);
    if (const auto& f = o.info().f)
      for (int i = 0; i < 64 && f->apply_power(pb.at(0), f->index() - 1) == 0; ++i) pb = sp.random_nonzero(rng);
    Block ra = block_of(o.query(a, pb, pb));
    Block rb = block_of(o.query(b, pb, sp.zero()));
    const int flush = k_ == OracleKind::E ? o.info().delays.d : 0;
    for (int i = 0; i < flush; ++i) {
      const Block z = sp.random(rng);
      ra = block_of(o.query(a, z, z));
      rb = block_of(o.query(b, z, z));
    }
    // A published feedback map lets the hidden start state in; its top power removes it again.
    const auto& f = o.info().f;
    if (f) return f->apply_power(sp.sub(ra, rb).at(0), f->index() - 1) == 0 ? 0 : 1;
    return ra == rb ? 0 : 1;
  }

 private:
  OracleKind k_;
};

class MdcbcSe : public Adversary {
 public:
  std::string name() const override { return "mdcbc-se/SE"; }

  int guess(OracleAccess& o, DeterministicRng& rng) const override {
    const PublicInfo& info = o.info();
    const BlockSpace& sp = info.space;
    int len = 0;
    if (info.f) len = info.f->index();
    else if (info.s4) len = info.s4->n0;
    else return 0;

    const SessionInfo a = open(o, OracleKind::SE, rng);
    const SessionInfo b = open(o, OracleKind::SE, rng);
    // c(1) is the opening output; preamble yields c(2..len).
    std::vector<Block> ca{block_of(a.initial)}, cb{block_of(b.initial)};
    for (int k = 1; k < len; ++k) {
      const Block x = sp.random(rng);
      ca.push_back(block_of(o.query(a.id, x, x)));
      const Block y = sp.random(rng);
      cb.push_back(block_of(o.query(b.id, y, y)));
    }
    const Block sa = state_estimate(info, ca), sb = state_estimate(info, cb);
    const Block pb = sp.random(rng);
    const Block pstar = sp.add(pb, sp.sub(sa, sb));
    const Block other = sp.add(pstar, sp.random_nonzero(rng));
    const Block ra = block_of(o.query(a.id, pb, pb));
    const Block rb = block_of(o.query(b.id, pstar, other));
    return ra == rb ? 0 : 1;
  }

 private:
  // Sum over j of f^j(c(t-j)), or its S4 analogue with public Q-products.
  static Block state_estimate(const PublicInfo& info, const std::vector<Block>& c) {
    const std::size_t t = c.size();
    if (info.f) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j < t; ++j) s ^= info.f->apply_power(c[t - 1 - j].at(0), static_cast<int>(j));
      return {s};
    }
    const S4Public& pub = *info.s4;
    const BlockSpace& sp = info.space;
    FieldVector s(pub.q, pub.n);
    for (std::size_t j = 0; j < t; ++j) s = s + s4_q_product(pub, static_cast<int>(j)) * sp.to_vector(c[t - 1 - j]);
    return sp.from_vector(s);
  }
};

class McfbChosenIv : public Adversary {
 public:
  std::string name() const override { return "mcfb-chosen-iv/E"; }

  int guess(OracleAccess& o, DeterministicRng& rng) const override {
    if (!o.model().chosen_iv) return 0;
    const PublicInfo& info = o.info();
    const BlockSpace& sp = info.space;
    auto project = [&](const Block& x) -> Block {
      if (info.s4) return sp.from_vector(s4_q_product(*info.s4, info.s4->n0 - 1) * sp.to_vector(x));
      if (info.f) return {info.f->apply_power(x.at(0), info.f->index() - 1)};
      return x;  // CFB: the projection is the identity
    };
    Block pb = sp.random_nonzero(rng);
    for (int i = 0; i < 64 && project(pb) == sp.zero(); ++i) pb = sp.random_nonzero(rng);

    const Block iv = info.iv_space.random(rng);
    const int a = open(o, OracleKind::E, rng, iv).id;
    const int b = open(o, OracleKind::E, rng, iv).id;
    Block ra = block_of(o.query(a, pb, pb));
    Block rb = block_of(o.query(b, pb, sp.zero()));
    for (int i = 0; i < info.delays.d; ++i) {
      const Block z = sp.random(rng);
      ra = block_of(o.query(a, z, z));
      rb = block_of(o.query(b, z, z));
    }
    return project(sp.sub(ra, rb)) == sp.zero() ? 0 : 1;
  }
};

class MixedSync : public Adversary {
 public:
  std::string name() const override { return "mixed-sync/E+SE"; }

  int guess(OracleAccess& o, DeterministicRng& rng) const override {
    if (!o.model().mixed()) return 0;
    const PublicInfo& info = o.info();
    const BlockSpace& sp = info.space;
    const int d = info.delays.d, ts = info.delays.t_s;
    std::optional<Block> iv;
    if (o.model().chosen_iv) iv = info.iv_space.random(rng);
    const int e = open(o, OracleKind::E, rng, iv).id;
    const int s = open(o, OracleKind::SE, rng, iv).id;

    // The E answer to query k + d and the SE answer to query k both encrypt p(k).
    std::vector<Block> er, sr;
    int streak = 0;
    const int rounds = 4 * (ts + d) + 8;
    bool synced = false;
    for (int r = 1; r <= rounds && !synced; ++r) {
      const Block x = sp.random(rng);
      er.push_back(block_of(o.query(e, x, x)));
      sr.push_back(block_of(o.query(s, x, x)));
      if (r > d) {
        const std::size_t k = static_cast<std::size_t>(r - d);
        streak = sr[k - 1] == er[k - 1 + d] ? streak + 1 : 0;
      }
      synced = streak >= ts;
    }
    if (!synced) return 0;  // abstain

    const Block pb = sp.random_nonzero(rng);
    Block er_last = block_of(o.query(e, pb, pb));
    const Block s_ans = block_of(o.query(s, pb, sp.zero()));
    for (int i = 0; i < d; ++i) {
      const Block z = sp.random(rng);
      er_last = block_of(o.query(e, z, z));
    }
    return er_last == s_ans ? 0 : 1;
  }
};

std::vector<OracleKind> available(const GameModel& m) {
  std::vector<OracleKind> out;
  if (m.has_e) out.push_back(OracleKind::E);
  if (m.has_se) out.push_back(OracleKind::SE);
  return out;
}

}  // namespace

std::shared_ptr<const Adversary> attack_dcbc_blockwise(OracleKind oracle) {
  return std::make_shared<Blockwise>(oracle);
}
std::shared_ptr<const Adversary> attack_fixed_iv_collision(OracleKind oracle) {
  return std::make_shared<FixedIv>(oracle);
}
std::shared_ptr<const Adversary> attack_mdcbc_se() { return std::make_shared<MdcbcSe>(); }
std::shared_ptr<const Adversary> attack_mcfb_chosen_iv() { return std::make_shared<McfbChosenIv>(); }
std::shared_ptr<const Adversary> attack_mixed_sync() { return std::make_shared<MixedSync>(); }

const std::vector<AttackEntry>& attack_registry() {
  static const std::vector<AttackEntry> reg = {
      {"dcbc-blockwise", [](SchemeId, const GameModel& m) { return available(m); },
       [](OracleKind k) { return attack_dcbc_blockwise(k); }},
      {"fixed-iv-collision",
       [](SchemeId, const GameModel& m) { return m.chosen_iv ? available(m) : std::vector<OracleKind>{}; },
       [](OracleKind k) { return attack_fixed_iv_collision(k); }},
      {"mdcbc-se",
       [](SchemeId id, const GameModel& m) {
         return (id == SchemeId::mdcbc || id == SchemeId::s4) && m.has_se ? std::vector<OracleKind>{OracleKind::SE}
                                                                          : std::vector<OracleKind>{};
       },
       [](OracleKind) { return attack_mdcbc_se(); }},
      {"mcfb-chosen-iv",
       [](SchemeId id, const GameModel& m) {
         const bool fits = id == SchemeId::mcfb || id == SchemeId::cfb || id == SchemeId::s4;
         return fits && m.chosen_iv && m.has_e ? std::vector<OracleKind>{OracleKind::E} : std::vector<OracleKind>{};
       },
       [](OracleKind) { return attack_mcfb_chosen_iv(); }},
      {"mixed-sync",
       [](SchemeId, const GameModel& m) {
         return m.mixed() ? std::vector<OracleKind>{OracleKind::E} : std::vector<OracleKind>{};
       },
       [](OracleKind) { return attack_mixed_sync(); }},
  };
  return reg;
}

const AttackEntry& attack_by_name(const std::string& name) {
  for (auto& a : attack_registry())
    if (a.name == name) return a;
  throw std::invalid_argument("unknown attack: " + name);
}

SchemeFactory scheme_factory(SchemeId id, const SuiteConfig& cfg) {
  if (id == SchemeId::s4) {
    const S4Shape shape = cfg.s4;
    return [shape](DeterministicRng& rng) -> std::shared_ptr<const Scheme> {
      GeneratedParams g = gen_params(shape.k_bits, shape.q, shape.n, shape.ell, rng);
      return std::make_shared<S4Scheme>(std::make_shared<const S4Params>(std::move(g.params)),
                                        default_rule(shape.ell));
    };
  }
  const ModeConfig mc = cfg.mode;
  return [id, mc](DeterministicRng& rng) {
    const SecretKey key = gen_key(128, rng);
    return make_mode(id, key, mc, rng);
  };
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::break_found: return "BREAK";
    case Verdict::secure_so_far: return "SECURE-SO-FAR";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Verdict classify(const std::vector<ExperimentReport>& reports) {
  bool all_low = true;
  for (auto& r : reports) {
    if (r.ci_low > kBreakThreshold) return Verdict::break_found;
    if (r.advantage > kSecureThreshold) all_low = false;
  }
  return all_low ? Verdict::secure_so_far : Verdict::inconclusive;
}

const std::vector<SchemeId>& table1_rows() {
  static const std::vector<SchemeId> rows = {SchemeId::cbc, SchemeId::dcbc, SchemeId::cfb, SchemeId::s4};
  return rows;
}

bool table1_expects_secure(SchemeId id, const GameModel& m) {
  switch (id) {
    case SchemeId::s4: return true;
    case SchemeId::cbc: return false;
    case SchemeId::dcbc: return m.name == "riv-e";
    case SchemeId::cfb: return !m.chosen_iv;
    default: throw std::invalid_argument("scheme has no row in the table");
  }
}

CellResult run_cell(SchemeId id, const GameModel& model, std::uint64_t trials, std::uint64_t seed,
                    const SuiteConfig& cfg) {
  CellResult cell;
  cell.scheme = id;
  cell.model = model.name;
  cell.expected_secure = table1_expects_secure(id, model);
  const SchemeFactory gen = scheme_factory(id, cfg);
  std::uint64_t salt = fnv1a64(scheme_name(id) + "|" + model.name);
  for (auto& entry : attack_registry()) {
    for (OracleKind k : entry.variants(id, model)) {
      auto adv = entry.make(k);
      const std::uint64_t s = stream_seed(seed, salt++);
      cell.reports.push_back(estimate_advantage(gen, model, *adv, trials, s, scheme_name(id)));
    }
  }
  cell.verdict = classify(cell.reports);
  return cell;
}

std::vector<CellResult> run_table1(std::uint64_t trials, std::uint64_t seed, const SuiteConfig& cfg) {
  std::vector<CellResult> cells;
  for (SchemeId id : table1_rows())
    for (auto& m : all_models()) cells.push_back(run_cell(id, m, trials, seed, cfg));
  return cells;
}

std::string render_table1(const std::vector<CellResult>& cells) {
  std::ostringstream os;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  os << pad("scheme", 8);
  for (auto& m : all_models()) os << pad(m.label, 16);
  os << '\n';
  for (SchemeId id : table1_rows()) {
    os << pad(scheme_name(id), 8);
    for (auto& m : all_models()) {
      std::string mark = "-";
      for (auto& c : cells)
        if (c.scheme == id && c.model == m.name) {
          double best = 0;
          for (auto& r : c.reports) best = std::max(best, r.advantage);
          std::ostringstream cell;
          cell << (c.verdict == Verdict::break_found ? "x" : c.verdict == Verdict::secure_so_far ? "ok" : "?")
               << (c.agrees() ? "" : "!") << ' ' << std::fixed;
          cell.precision(2);
          cell << best;
          mark = cell.str();
        }
      os << pad(mark, 16);
    }
    os << '\n';
  }
  os << "x = BREAK, ok = SECURE-SO-FAR, ? = INCONCLUSIVE, ! = disagrees with the expected grid;"
        " number = strongest point advantage\n";
  return os.str();
}

}  // namespace s4
