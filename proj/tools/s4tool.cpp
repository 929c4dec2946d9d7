#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "s4/attack_suite.hpp"
#include "s4/frame.hpp"
#include "s4/keyfile.hpp"
#include "s4/sync_channel.hpp"

using namespace s4;

namespace {

enum Exit { kOk = 0, kUsage = 1, kCrypto = 2, kAcceptance = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  if (s.empty() || s.size() > 16 || s.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos)
    throw UsageError("digest must be 1 to 16 hex digits");
  return std::stoull(s, nullptr, 16);
}

std::uint64_t public_digest(const S4Params& p) {
  std::ostringstream os;
  os << p.q << '|' << p.n << '|' << p.ell;
  for (auto* fam : {&p.Q, &p.E, &p.B})
    for (auto& m : *fam) os << '|' << to_string(m);
  os << '|' << to_string(p.M);
  const std::string s = os.str();
  return fnv1a64(s);
}

// Explicit seed when given, otherwise fresh entropy.
DeterministicRng make_rng(const std::optional<std::uint64_t>& seed) {
  if (seed) return DeterministicRng(*seed);
  std::random_device rd;
  return DeterministicRng((std::uint64_t(rd()) << 32) ^ rd());
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const auto k = std::stoull(s);
      return {k, k};
    }
    const auto a = std::stoull(s.substr(0, colon)), b = std::stoull(s.substr(colon + 1));
    if (a > b) throw UsageError("--corrupt range is reversed");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("--corrupt expects a:b");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S4 self-synchronizing stream cipher toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  app.add_option("--seed", seed, "Master seed for all randomness");
  app.add_option("--jobs", jobs, "Worker threads for attack trials")->check(CLI::NonNegativeNumber);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Generate a key file");
  int k_bits = 128, ell = 2;
  std::uint32_t q = 257;
  std::size_t n = 4;
  std::string switching = "time_mod", key_out;
  keygen->add_option("--k", k_bits, "Key length in bits")->check(CLI::Range(8, 4096));
  keygen->add_option("--q", q, "Field size (prime, 256 <= q <= 65536 for file encryption)");
  keygen->add_option("--n", n, "Block dimension")->check(CLI::Range(2, 64));
  keygen->add_option("--ell", ell, "Number of switching modes")->check(CLI::Range(1, 16));
  keygen->add_option("--switch", switching, "time_mod or ciphertext_driven")
      ->check(CLI::IsMember({"time_mod", "ciphertext_driven"}));
  keygen->add_option("--out", key_out, "Key file path")->required();

  // encrypt / decrypt
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file into an S4S1 frame");
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt an S4S1 frame");
  std::string key_path, in_path, out_path, expect_digest;
  std::optional<std::uint64_t> iv_seed;
  for (auto* sc : {encrypt, decrypt}) {
    sc->add_option("--key", key_path, "Key file")->required();
    sc->add_option("--in", in_path, "Input file")->required();
    sc->add_option("--out", out_path, "Output file")->required();
  }
  encrypt->add_option("--iv-seed", iv_seed, "Seed for the IV and hidden state (defaults to --seed)");
  decrypt->add_option("--expect-digest", expect_digest, "FNV-1a-64 of the expected plaintext, hex");

  // sync-demo
  auto* demo = app.add_subcommand("sync-demo", "Write a synchronization trace as CSV");
  bool f7_example = false;
  std::string demo_scheme, corrupt, csv_out;
  std::size_t blocks = 0;
  demo->add_flag("--paper-example", f7_example, "Use the built-in three-dimensional example over F7");
  demo->add_option("--scheme", demo_scheme, "Scheme name");
  demo->add_option("--corrupt", corrupt, "Corrupt channel blocks a:b (inclusive)");
  demo->add_option("--blocks", blocks, "Number of plaintext blocks");
  demo->add_option("--out", csv_out, "CSV path (stdout if omitted)");

  // attack / table1
  auto* attack = app.add_subcommand("attack", "Estimate one attack's advantage");
  std::string attack_name, attack_scheme, model_name;
  std::uint64_t trials = 400;
  attack->add_option("--name", attack_name, "Attack name")->required();
  attack->add_option("--scheme", attack_scheme, "Scheme name")->required();
  attack->add_option("--model", model_name, "Game model")->required();
  attack->add_option("--trials", trials, "Trials")->check(CLI::PositiveNumber);
  auto* table1 = app.add_subcommand("table1", "Run the full security grid");
  table1->add_option("--trials", trials, "Trials per attack")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }
  if (jobs > 0) omp_set_num_threads(jobs);
  const std::uint64_t master = seed.value_or(0);

  try {
    if (*keygen) {
      if (!is_prime(q) || q > kMaxTableSize) throw UsageError("--q must be a prime no larger than 65536");
      DeterministicRng rng = make_rng(seed);
      const KeyFile k = generate_keyfile(k_bits, q, n, ell,
                                         switching == "time_mod" ? SwitchKind::time_mod : SwitchKind::ciphertext_driven,
                                         rng);
      const auto scheme = k.scheme();
      const ValidationReport v = validate_params(scheme->params());
      if (!v.ok()) {
        std::cerr << "generated parameters failed validation:\n" << v.summary();
        return kCrypto;
      }
      k.save(key_out);
      std::cout << "public-digest " << hex64(public_digest(scheme->params())) << '\n'
                << "n0 " << scheme->params().n0 << " sync-delay " << scheme->params().sync_delay() << '\n';
      return kOk;
    }

    if (*encrypt || *decrypt) {
      const KeyFile k = KeyFile::load(key_path);
      const auto scheme = k.scheme();
      if (k.q < 256) throw UsageError("file encryption needs q >= 256");
      const auto input = read_file(in_path);
      if (*encrypt) {
        DeterministicRng rng = make_rng(iv_seed ? iv_seed : seed);
        write_file(out_path, encrypt_bytes(*scheme, input, rng).encode());
        return kOk;
      }
      std::optional<std::uint64_t> want;
      if (!expect_digest.empty()) want = parse_hex64(expect_digest);
      DeterministicRng rng = make_rng(seed);
      const auto plain = decrypt_bytes(*scheme, Frame::decode(input), rng);
      write_file(out_path, plain);
      if (want && fnv1a64(plain.data(), plain.size()) != *want) {
        std::cerr << "plaintext digest " << hex64(fnv1a64(plain.data(), plain.size())) << " does not match\n";
        return kCrypto;
      }
      return kOk;
    }

    if (*demo) {
      SyncTrace trace;
      if (f7_example) {
        if (!demo_scheme.empty() || !corrupt.empty()) throw UsageError("--paper-example takes no --scheme/--corrupt");
        trace = run_f7_example(blocks ? blocks : 12, master);
      } else {
        if (demo_scheme.empty()) throw UsageError("sync-demo needs --paper-example or --scheme");
        const SchemeId id = scheme_from_name(demo_scheme);
        DeterministicRng rng(master);
        const auto scheme = scheme_factory(id)(rng);
        ChannelModel ch = ChannelModel::clean();
        std::uint64_t last = 0;
        if (!corrupt.empty()) {
          const auto [a, b] = parse_range(corrupt);
          if (a == 0) throw UsageError("channel positions start at 1");
          ch = ChannelModel::burst(a, b - a + 1, rng.next());
          last = b;
        }
        const std::size_t need = static_cast<std::size_t>(last) + scheme->resync_window() + 8;
        const std::size_t nb = blocks ? blocks : std::max<std::size_t>(need, 24);
        if (nb <= last) throw UsageError("--blocks must extend past the corrupted range");
        trace = run_channel_sim(*scheme, ch, nb, rng.next());
      }
      if (csv_out.empty()) emit_csv(trace, std::cout);
      else emit_csv(trace, csv_out);
      return kOk;
    }

    if (*attack) {
      const AttackEntry& entry = attack_by_name(attack_name);
      const SchemeId id = scheme_from_name(attack_scheme);
      const GameModel& model = model_by_name(model_name);
      const auto variants = entry.variants(id, model);
      if (variants.empty())
        throw UsageError("attack " + attack_name + " does not apply to " + attack_scheme + " under " + model_name);
      const SchemeFactory gen = scheme_factory(id);
      std::uint64_t salt = 0;
      for (OracleKind kind : variants) {
        const auto adv = entry.make(kind);
        std::cout << estimate_advantage(gen, model, *adv, trials, stream_seed(master, salt++), attack_scheme)
                         .json_line()
                  << '\n';
      }
      return kOk;
    }

    if (*table1) {
      const auto cells = run_table1(trials, master);
      bool agree = true;
      for (auto& c : cells) {
        for (auto& r : c.reports) std::cout << r.json_line() << '\n';
        agree = agree && c.agrees();
      }
      std::cout << render_table1(cells);
      return agree ? kOk : kAcceptance;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCrypto;
  }
  return kUsage;
}
