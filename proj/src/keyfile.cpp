#include "s4/keyfile.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace s4 {

namespace {
const char* kind_name(SwitchKind k) { return k == SwitchKind::time_mod ? "time_mod" : "ciphertext_driven"; }
SwitchKind kind_from(const std::string& s) {
  if (s == "time_mod") return SwitchKind::time_mod;
  if (s == "ciphertext_driven") return SwitchKind::ciphertext_driven;
  throw std::runtime_error("unknown switch rule '" + s + "'");
}
}  // namespace

std::string KeyFile::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "s4-key";
  j["version"] = 1;
  j["key_bits"] = key.bits;
  j["key"] = key.hex();
  j["q"] = q;
  j["n"] = n;
  j["ell"] = ell;
  j["public_seed"] = public_seed;
  j["switch"] = {{"kind", kind_name(rule.kind)}, {"phase", rule.phase}};
  return j.dump(2) + "\n";
}

KeyFile KeyFile::from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("format") != "s4-key" || j.at("version") != 1) throw std::runtime_error("not an s4 key file");
    KeyFile k;
    k.key = SecretKey::from_hex(j.at("key").get<std::string>());
    if (k.key.bits != j.at("key_bits").get<int>()) throw std::runtime_error("key length mismatch");
    k.q = j.at("q").get<std::uint32_t>();
    k.n = j.at("n").get<std::size_t>();
    k.ell = j.at("ell").get<int>();
    k.public_seed = j.at("public_seed").get<std::uint64_t>();
    k.rule = SwitchRule{kind_from(j.at("switch").at("kind").get<std::string>()), k.ell,
                        j.at("switch").at("phase").get<int>()};
    if (k.ell < 1 || k.n < 1) throw std::runtime_error("bad shape");
    require_prime(k.q);
    return k;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed key file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed key file: ") + e.what());
  }
}

void KeyFile::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << to_json();
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

KeyFile KeyFile::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

std::shared_ptr<const S4Scheme> KeyFile::scheme() const {
  auto p = std::make_shared<const S4Params>(derive_params(key, q, n, ell, public_seed));
  return std::make_shared<const S4Scheme>(std::move(p), rule);
}

KeyFile generate_keyfile(int k_bits, std::uint32_t q, std::size_t n, int ell, SwitchKind kind,
                         DeterministicRng& rng) {
  KeyFile k;
  k.key = gen_key(k_bits, rng);
  k.q = q;
  k.n = n;
  k.ell = ell;
  k.public_seed = rng.next();
  k.rule = SwitchRule{kind, ell, 0};
  return k;
}

}  // namespace s4
