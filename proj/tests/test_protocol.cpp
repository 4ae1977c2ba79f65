#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <set>

#include "json.hpp"
#include "nlgqkd/games.hpp"
#include "nlgqkd/protocol.hpp"

using namespace nlgqkd;
using namespace nlgqkd::protocol;

namespace {

keyrate::ProtocolParams easy_params(double n, double gamma, double omega_exp) {
  keyrate::ProtocolParams p;
  p.n = n;
  p.gamma = gamma;
  p.delta_tol = 0.05;
  p.omega_exp = omega_exp;
  p.l_ec = 16;
  p.l_key = 64;
  return p;
}

}  // namespace

TEST_CASE("hex encoding round-trips bit vectors") {
  BitVec bits = {1, 0, 1, 0, 0, 0, 0, 1};
  CHECK(bits_to_hex(bits) == "a1");
  CHECK(hex_to_bits("a1", 8) == bits);
  BitVec odd = {1, 1, 1};  // partial nibble pads with zeros
  CHECK(bits_to_hex(odd) == "e");
  CHECK(hex_to_bits("e", 3) == odd);
  CHECK_THROWS(hex_to_bits("g", 4));
  CHECK_THROWS(hex_to_bits("a", 12));
}

TEST_CASE("toeplitz hashing is GF(2)-linear") {
  rng::Stream rs(11, 0);
  ToeplitzHash h = ToeplitzHash::random(rs, 64, 16);
  CHECK(static_cast<int>(h.seed.size()) == 64 + 16 - 1);
  BitVec zero(64, 0);
  CHECK(h(zero) == BitVec(16, 0));
  for (int rep = 0; rep < 100; ++rep) {
    BitVec x(64), y(64), xy(64);
    for (int i = 0; i < 64; ++i) {
      x[i] = static_cast<uint8_t>(rs.bits() & 1);
      y[i] = static_cast<uint8_t>(rs.bits() & 1);
      xy[i] = x[i] ^ y[i];
    }
    BitVec hx = h(x), hy = h(y), hxy = h(xy);
    for (int i = 0; i < 16; ++i) CHECK(hxy[i] == (hx[i] ^ hy[i]));
  }
  CHECK_THROWS(h(BitVec(63, 0)));
}

TEST_CASE("syndrome decoding is self-consistent and fixes single flips") {
  rng::Stream rs(1, 0);
  LinearCode code = LinearCode::random(rs, 16, 12);
  for (int rep = 0; rep < 50; ++rep) {
    uint64_t s = rs.bits() & 0xffff;
    CHECK(code.corr(s, code.synd(s)) == s);
  }
  // this seed gives distinct nonzero single-bit syndromes (verified below),
  // so every single flip is corrected exactly
  std::set<uint64_t> syn;
  for (int i = 0; i < 16; ++i) {
    uint64_t z = code.synd(1ull << i);
    CHECK(z != 0);
    CHECK(syn.insert(z).second);
  }
  for (int i = 0; i < 16; ++i) {
    uint64_t s = 0x5a5a;
    uint64_t flipped = s ^ (1ull << i);
    CHECK(code.corr(flipped, code.synd(s)) == s);
  }
  CHECK_THROWS(LinearCode::random(rs, 65, 4));
}

TEST_CASE("honest device empirical win frequency tracks the closed form") {
  games::GameSpec msg = games::GameSpec::msg();
  for (double q : {0.0, 0.01, 0.02}) {
    games::QuantumStrategy s = games::msg_honest_strategy();
    if (q > 0.0) s = games::apply_depolarizing(s, q, true);
    DevicePair dev = honest_devices(msg, s);
    rng::Stream rin(123, 0), rdev(123, 1);
    const int n = 100000;
    int wins = 0;
    for (int i = 0; i < n; ++i) {
      int x = static_cast<int>(rin.below(3)), y = static_cast<int>(rin.below(3));
      auto [a, b] = dev.sample(i, x, y, rdev);
      wins += msg.predicate(x, y, a, b);
    }
    const double w = games::msg_expected_win(q);
    const double tol = 4.0 * std::sqrt(std::max(w * (1.0 - w), 1e-6) / n);
    CHECK(std::abs(static_cast<double>(wins) / n - w) <= tol);
  }
}

TEST_CASE("honest noiseless run completes with matching keys") {
  games::GameSpec msg = games::GameSpec::msg();
  DevicePair dev = honest_devices(msg, games::msg_honest_strategy());
  keyrate::ProtocolParams p = easy_params(2000, 0.2, 1.0);
  Transcript tr = run_protocol(msg, dev, p, nullptr, 99);
  CHECK(tr.pe_pass);
  CHECK(tr.ec_pass);
  CHECK(!tr.aborted());
  REQUIRE(tr.key_a.size() == 64);
  CHECK(tr.key_a == tr.key_b);
  // test rounds carry the predicate outcome, generation rounds carry bottom
  for (int64_t i = 0; i < tr.n; ++i) {
    if (tr.t[i]) CHECK(tr.c[i] >= 0);
    else CHECK(tr.c[i] == -1);
  }
  // rerun with the same seed reproduces the transcript bit for bit
  Transcript tr2 = run_protocol(msg, dev, p, nullptr, 99);
  CHECK(tr2.key_a == tr.key_a);
  CHECK(tr2.sa == tr.sa);
  CHECK(tr2.x == tr.x);
}

TEST_CASE("parameter estimation counts losses against the tolerance") {
  games::GameSpec msg = games::GameSpec::msg();
  // Alice answers 000 (key bit always 0), Bob 111 (key bit always 1): every
  // round loses
  DevicePair losers = deterministic_devices(msg, {0, 0, 0}, {3, 3, 3});
  keyrate::ProtocolParams p = easy_params(500, 0.5, 1.0);
  p.delta_tol = 0.01;
  int aborts = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Transcript tr = run_protocol(msg, losers, p, nullptr, seed);
    if (!tr.pe_pass) ++aborts;
  }
  CHECK(aborts == 20);
  // full tolerance and full testing always pass parameter estimation
  keyrate::ProtocolParams lax = easy_params(200, 1.0, 1.0);
  lax.delta_tol = 1.0;
  Transcript tr = run_protocol(msg, losers, lax, nullptr, 7);
  CHECK(tr.pe_pass);
  // the PE statistic is a pure count over test rounds
  int losses = 0;
  for (int64_t i = 0; i < tr.n; ++i)
    if (tr.c[i] == 0) ++losses;
  CHECK(static_cast<double>(losses) <=
        (1.0 - lax.omega_exp + lax.delta_tol) * lax.gamma * lax.n);
}

TEST_CASE("aborted transcripts carry no key material") {
  games::GameSpec msg = games::GameSpec::msg();
  DevicePair losers = deterministic_devices(msg, {0, 0, 0}, {3, 3, 3});
  keyrate::ProtocolParams p = easy_params(500, 0.5, 1.0);
  p.delta_tol = 0.01;
  Transcript tr = run_protocol(msg, losers, p, nullptr, 3);
  REQUIRE(tr.aborted());
  CHECK(tr.key_a.empty());
  CHECK(tr.key_b.empty());
  nlohmann::json j = nlohmann::json::parse(tr.to_json());
  CHECK(!j["private"].contains("key_a"));
  CHECK(!j["private"].contains("key_b"));
  CHECK(j["public"]["pe_pass"] == false);
  // a completed run serializes its keys
  DevicePair honest = honest_devices(msg, games::msg_honest_strategy());
  Transcript ok = run_protocol(msg, honest, easy_params(1000, 0.2, 1.0), nullptr, 4);
  REQUIRE(!ok.aborted());
  nlohmann::json jo = nlohmann::json::parse(ok.to_json());
  CHECK(jo["private"].contains("key_a"));
  CHECK(jo["public"]["seed"] == 4);
}

TEST_CASE("block-code runs correct residual errors at small n") {
  games::GameSpec msg = games::GameSpec::msg();
  games::QuantumStrategy s = games::apply_depolarizing(games::msg_honest_strategy(), 0.01, true);
  DevicePair dev = honest_devices(msg, s);
  rng::Stream rs(21, 0);
  LinearCode code = LinearCode::random(rs, 64, 24);
  keyrate::ProtocolParams p = easy_params(64, 0.2, games::msg_expected_win(0.01));
  p.delta_tol = 0.5;
  int completed = 0, matched = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Transcript tr = run_protocol(msg, dev, p, &code, seed);
    if (!tr.aborted()) {
      ++completed;
      matched += tr.key_a == tr.key_b ? 1 : 0;
      CHECK(tr.syndrome.size() == 24);
    }
  }
  // whenever the verification hash passed, privacy amplification agreed
  CHECK(completed > 0);
  CHECK(matched == completed);
}

TEST_CASE("monte carlo completeness is thread-count independent") {
  games::GameSpec msg = games::GameSpec::msg();
  games::QuantumStrategy s = games::apply_depolarizing(games::msg_honest_strategy(), 0.02, true);
  DevicePair dev = honest_devices(msg, s);
  keyrate::ProtocolParams p = easy_params(800, 0.3, games::msg_expected_win(0.02));
  p.delta_tol = 0.02;
  p.l_key = 0;
  setenv("NLGQKD_THREADS", "1", 1);
  CompletenessStats one = monte_carlo_completeness(msg, dev, p, 60, 31);
  setenv("NLGQKD_THREADS", "4", 1);
  CompletenessStats four = monte_carlo_completeness(msg, dev, p, 60, 31);
  unsetenv("NLGQKD_THREADS");
  CHECK(one.pe_aborts == four.pe_aborts);
  CHECK(one.ec_aborts == four.ec_aborts);
  // widening the tolerance can only reduce aborts on the same seeds
  keyrate::ProtocolParams wide = p;
  wide.delta_tol = 0.04;
  CompletenessStats w = monte_carlo_completeness(msg, dev, wide, 60, 31);
  CHECK(w.pe_aborts <= one.pe_aborts);
  // noiseless devices never abort
  DevicePair clean = honest_devices(msg, games::msg_honest_strategy());
  keyrate::ProtocolParams cp = easy_params(500, 0.2, 1.0);
  cp.l_key = 0;
  CompletenessStats c = monte_carlo_completeness(msg, clean, cp, 100, 5);
  CHECK(c.pe_aborts == 0);
  CHECK(c.ec_aborts == 0);
}

TEST_CASE("forced mismatches pass the hash at the 2-universal rate") {
  CorrectnessStats s = monte_carlo_correctness(8, 20000, 77);
  CHECK(s.pass_rate <= s.bound);
  CHECK(s.bound == doctest::Approx(1.0 / 256.0 +
                                   3.0 * std::sqrt((1.0 / 256.0) * (255.0 / 256.0) / 20000.0))
                       .epsilon(1e-12));
  // l_ec = 0 means no verification at all
  CorrectnessStats empty = monte_carlo_correctness(0, 100, 1);
  CHECK(empty.pass_rate == 1.0);
}
