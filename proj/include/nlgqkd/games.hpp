#ifndef NLGQKD_GAMES_HPP
#define NLGQKD_GAMES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nlgqkd/qmath.hpp"

namespace nlgqkd::games {

// Two-party game with a matching-bit predicate. The predicate is never
// stored: V(x,y,a,b) = [sk_a(x,y,a) == sk_b(x,y,b)]. The tripartite
// extension additionally requires a guesser bit c == sk_a(x,y,a).
struct GameSpec {
  std::string name;
  std::vector<std::string> x_alphabet, y_alphabet, a_alphabet, b_alphabet;
  std::vector<double> px, py;                      // product input distribution
  std::vector<std::vector<std::vector<int>>> sk_a; // [x][y][a] -> {0,1}
  std::vector<std::vector<std::vector<int>>> sk_b; // [x][y][b] -> {0,1}

  int nx() const { return static_cast<int>(x_alphabet.size()); }
  int ny() const { return static_cast<int>(y_alphabet.size()); }
  int na() const { return static_cast<int>(a_alphabet.size()); }
  int nb() const { return static_cast<int>(b_alphabet.size()); }

  bool uniform_pi() const;
  double pi(int x, int y) const { return px[x] * py[y]; }
  int predicate(int x, int y, int a, int b) const {
    return sk_a[x][y][a] == sk_b[x][y][b] ? 1 : 0;
  }
  void validate() const;

  static GameSpec msg();
  static GameSpec chsh();
  static GameSpec from_json_file(const std::string& path);
  static GameSpec from_json_text(const std::string& text);
};

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exact rational when the input distribution is uniform, float otherwise.
struct GameValue {
  bool exact = false;
  Rational rational;
  double v = 0.0;
};

// Weighted mixture of deterministic strategies.
struct DeterministicStrategy {
  double weight = 1.0;
  std::vector<int> table_a;                 // x -> a
  std::vector<int> table_b;                 // y -> b
  std::vector<std::vector<int>> table_c;    // (x,y) -> {0,1}; empty if bipartite
};
using ClassicalStrategy = std::vector<DeterministicStrategy>;

struct QuantumStrategy {
  qmath::QState state;  // on A-part (x) B-part
  int dim_a = 0, dim_b = 0;
  std::vector<std::vector<qmath::CMatrix>> povms_a;  // [x][a] on A-part
  std::vector<std::vector<qmath::CMatrix>> povms_b;  // [y][b] on B-part
  // Set when the state is declared as a tensor of two 4-dim pairs
  // (qubit order A1 A2 B1 B2, pairs (A1,B1) and (A2,B2)).
  bool two_pair_structure = false;
  void validate() const;
  static QuantumStrategy from_json_file(const std::string& path);
};

struct NoiseModel {
  enum class Kind { depolarizing };
  Kind kind = Kind::depolarizing;
  double q = 0.0;  // in [0, 1/2]
};

// Brute force over deterministic tables; search space capped at 1e7.
GameValue classical_value(const GameSpec& game);
// Tripartite value with the guesser bit; the max over c-tables factorizes
// over (x,y) cells, so each cell takes its best c in {0,1}.
GameValue classical_value_tripartite(const GameSpec& game);

double classical_win_prob(const GameSpec& game, const ClassicalStrategy& mix);

double quantum_win_prob(const GameSpec& game, const QuantumStrategy& strat);
double qber(const GameSpec& game, const QuantumStrategy& strat);

QuantumStrategy msg_honest_strategy();
QuantumStrategy chsh_honest_strategy();

// rho -> (1-2q) rho + 2q tau, either on each declared 4-dim pair or globally.
QuantumStrategy apply_depolarizing(const QuantumStrategy& strat, double q, bool per_pair);

// Expected winning probability of the noisy honest magic-square strategy,
// closed form: 1 - (2/9) q (7 - 5q).
double msg_expected_win(double q);

// Builds the test-round operator for each input pair (x,y) two ways -- once
// from its definition as a sum over guesser outcomes, once from the
// rearranged three-term form obtained after substituting the completeness
// relations -- and returns the max entrywise deviation over all inputs.
// f0_per_xy holds the guesser's first POVM element for each (x,y),
// row-major over (x,y); all on a common guesser dimension.
double verify_pi_simplification(const QuantumStrategy& ab,
                                const std::vector<qmath::CMatrix>& f0_per_xy);

}  // namespace nlgqkd::games

#endif
