#include "doctest.h"

#include <cmath>

#include "nlgqkd/games.hpp"
#include "nlgqkd/rng.hpp"

using namespace nlgqkd;
using games::GameSpec;

TEST_CASE("magic square classical value is exactly 8/9") {
  GameSpec g = GameSpec::msg();
  g.validate();
  games::GameValue v = games::classical_value(g);
  REQUIRE(v.exact);
  CHECK(v.rational.num == 8);
  CHECK(v.rational.den == 9);
  CHECK(v.v == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("magic square tripartite classical value stays 8/9") {
  // the guesser bit can always copy the deterministic key bit, so the
  // three-party optimum coincides with the two-party one
  games::GameValue v = games::classical_value_tripartite(GameSpec::msg());
  REQUIRE(v.exact);
  CHECK(v.rational.num == 8);
  CHECK(v.rational.den == 9);
}

TEST_CASE("chsh classical value is exactly 3/4") {
  games::GameValue v = games::classical_value(GameSpec::chsh());
  REQUIRE(v.exact);
  CHECK(v.rational.num == 3);
  CHECK(v.rational.den == 4);
}

TEST_CASE("explicit deterministic strategies evaluate correctly") {
  GameSpec chsh = GameSpec::chsh();
  games::ClassicalStrategy all_zero = {{1.0, {0, 0}, {0, 0}, {}}};
  CHECK(games::classical_win_prob(chsh, all_zero) == doctest::Approx(0.75).epsilon(1e-15));
  // mixing two optimal strategies stays optimal
  games::ClassicalStrategy mix = {{0.5, {0, 0}, {0, 0}, {}}, {0.5, {1, 1}, {1, 0}, {}}};
  CHECK(games::classical_win_prob(chsh, mix) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("honest magic square strategy wins with certainty") {
  games::QuantumStrategy s = games::msg_honest_strategy();
  s.validate();
  CHECK(s.two_pair_structure);
  CHECK(std::abs(games::quantum_win_prob(GameSpec::msg(), s) - 1.0) <= 1e-10);
  CHECK(games::qber(GameSpec::msg(), s) <= 1e-10);
}

TEST_CASE("honest chsh strategy reaches the Tsirelson value") {
  games::QuantumStrategy s = games::chsh_honest_strategy();
  s.validate();
  const double tsirelson = (2.0 + std::sqrt(2.0)) / 4.0;
  CHECK(std::abs(games::quantum_win_prob(GameSpec::chsh(), s) - tsirelson) <= 1e-10);
  CHECK(std::abs(tsirelson - 0.8535533905932737) <= 1e-15);
}

TEST_CASE("per-pair depolarizing noise matches the closed-form winning probability") {
  GameSpec msg = GameSpec::msg();
  games::QuantumStrategy honest = games::msg_honest_strategy();
  for (double q : {0.0, 0.005, 0.01, 0.02, 0.1, 0.25, 0.5}) {
    games::QuantumStrategy noisy = games::apply_depolarizing(honest, q, true);
    noisy.validate();
    const double expect = games::msg_expected_win(q);
    CHECK(std::abs(games::quantum_win_prob(msg, noisy) - expect) <= 1e-9);
  }
  // frozen spot values of the closed form
  CHECK(games::msg_expected_win(0.01) == doctest::Approx(1.0 - 0.015444444444444445).epsilon(1e-12));
  CHECK(games::msg_expected_win(0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("global depolarizing acts linearly on the chsh value") {
  GameSpec chsh = GameSpec::chsh();
  games::QuantumStrategy honest = games::chsh_honest_strategy();
  const double w0 = games::quantum_win_prob(chsh, honest);
  for (double q : {0.1, 0.3}) {
    games::QuantumStrategy noisy = games::apply_depolarizing(honest, q, false);
    const double expect = (1.0 - 2.0 * q) * w0 + 2.0 * q * 0.5;
    CHECK(std::abs(games::quantum_win_prob(chsh, noisy) - expect) <= 1e-10);
  }
}

TEST_CASE("game specs round-trip through JSON") {
  const char* text = R"({
    "name": "chsh",
    "x_alphabet": ["0","1"], "y_alphabet": ["0","1"],
    "a_alphabet": ["0","1"], "b_alphabet": ["0","1"],
    "px": [0.5,0.5], "py": [0.5,0.5],
    "sk_a": [[[0,1],[0,1]],[[0,1],[0,1]]],
    "sk_b": [[[0,1],[0,1]],[[0,1],[1,0]]]
  })";
  GameSpec g = GameSpec::from_json_text(text);
  games::GameValue v = games::classical_value(g);
  REQUIRE(v.exact);
  CHECK(v.rational.num == 3);
  CHECK(v.rational.den == 4);
  CHECK_THROWS(GameSpec::from_json_text("{\"name\": \"broken\"}"));
}

TEST_CASE("test-round operator rearrangement is an identity") {
  games::QuantumStrategy s = games::msg_honest_strategy();
  rng::Stream rs(7, 0);
  for (int rep = 0; rep < 5; ++rep) {
    // random Hermitian guesser element per input pair on a 3-dim third system
    std::vector<qmath::CMatrix> f0;
    for (int k = 0; k < 9; ++k) {
      qmath::CMatrix m(3, 3);
      for (int i = 0; i < 3; ++i) {
        m.at(i, i) = rs.uniform();
        for (int j = i + 1; j < 3; ++j) {
          qmath::cplx v(rs.uniform() - 0.5, rs.uniform() - 0.5);
          m.at(i, j) = v;
          m.at(j, i) = std::conj(v);
        }
      }
      f0.push_back(m);
    }
    CHECK(games::verify_pi_simplification(s, f0) <= 1e-10);
  }
}
