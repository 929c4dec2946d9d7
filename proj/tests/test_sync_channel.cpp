#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "s4/attack_suite.hpp"
#include "s4/sync_channel.hpp"

using namespace s4;

namespace {

std::string csv(const SyncTrace& t) {
  std::ostringstream os;
  emit_csv(t, os);
  return os.str();
}

std::shared_ptr<const Scheme> make(SchemeId id, std::uint64_t seed) {
  DeterministicRng rng(seed);
  return scheme_factory(id)(rng);
}

}  // namespace

TEST_CASE("printed example synchronizes after two clocks") {
  const SyncTrace t = run_f7_example(12, 1);
  REQUIRE(t.rows.size() == 12);
  CHECK_FALSE(t.rows[0].synced);
  CHECK(t.rows[0].e == std::vector<std::uint64_t>{5, 5, 3});
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].synced);
  CHECK_FALSE(t.rows[0].plain_match.has_value());
  for (std::size_t i = 2; i < t.rows.size(); ++i) CHECK(t.rows[i].plain_match == std::optional<bool>(true));
}

TEST_CASE("error columns do not depend on the permutation") {
  const SyncTrace base = run_f7_example(12, 2);
  DeterministicRng rng(3);
  for (int i = 0; i < 5; ++i) {
    const SyncTrace other = run_f7_example(12, 2, sample_uniform_permutation(7, rng));
    for (std::size_t r = 0; r < base.rows.size(); ++r) CHECK(other.rows[r].e == base.rows[r].e);
  }
}

TEST_CASE("CSV layout") {
  const SyncTrace t = run_f7_example(4, 1);
  const std::string text = csv(t);
  CHECK(text.rfind("t,e_0,e_1,e_2,synced,plain_match\n", 0) == 0);
  CHECK(text.find("\n1,5,5,3,0,na\n") != std::string::npos);
  CHECK(text.find("\n2,0,0,0,1,") != std::string::npos);
  CHECK(csv(t) == text);
  SyncTrace empty;
  empty.dims = 2;
  CHECK(csv(empty) == "t,e_0,e_1,synced,plain_match\n");
  const std::string path = "sync_channel_test.csv";
  emit_csv(t, path);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == text);
  std::remove(path.c_str());
  CHECK_THROWS(emit_csv(t, std::string("/nonexistent-dir/x.csv")));
}

TEST_CASE("clean channel: mismatches only in the startup window") {
  for (SchemeId id : all_schemes()) {
    CAPTURE(scheme_name(id));
    auto s = make(id, 4);
    const SyncTrace t = run_channel_sim(*s, ChannelModel::clean(), 40, 5);
    for (auto step : t.mismatch_steps()) CHECK(step < static_cast<std::uint64_t>(s->delays().d + s->delays().t_s));
  }
}

TEST_CASE("CBC: one corrupted block garbles exactly one recovered block after it") {
  auto s = make(SchemeId::cbc, 6);
  const SyncTrace t = run_channel_sim(*s, ChannelModel::corrupt({5}), 20, 7);
  CHECK(t.mismatch_steps() == std::vector<std::uint64_t>{5, 6});
  std::size_t after = 0;
  for (auto step : t.mismatch_steps()) after += step > 5;
  CHECK(after == 1);
}

TEST_CASE("S4: corrupted burst, matches resume within the window") {
  auto s = make(SchemeId::s4, 8);
  const std::uint64_t w = static_cast<std::uint64_t>(s->resync_window());
  const SyncTrace t = run_channel_sim(*s, ChannelModel::burst(10, 3, 9), 12 + w + 20, 10);
  for (auto step : t.mismatch_steps()) CHECK((step <= 12 + w || step < w));
  CHECK_FALSE(t.mismatch_steps().empty());
  for (auto& r : t.rows)
    if (r.t > 12 + w) {
      CHECK(r.synced);
    }
}

TEST_CASE("corruption past the end is rejected") {
  auto s = make(SchemeId::cbc, 11);
  CHECK_THROWS_AS(run_channel_sim(*s, ChannelModel::corrupt({20}), 20, 1), std::invalid_argument);
}
