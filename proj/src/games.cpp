#include "nlgqkd/games.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nlgqkd::games {

using qmath::CMatrix;
using qmath::cplx;
using qmath::QState;

bool GameSpec::uniform_pi() const {
  const double ux = 1.0 / nx(), uy = 1.0 / ny();
  for (double p : px)
    if (std::abs(p - ux) > 1e-12) return false;
  for (double p : py)
    if (std::abs(p - uy) > 1e-12) return false;
  return true;
}

void GameSpec::validate() const {
  if (x_alphabet.empty() || y_alphabet.empty() || a_alphabet.empty() || b_alphabet.empty())
    throw std::invalid_argument("GameSpec: empty alphabet");
  if (px.size() != x_alphabet.size() || py.size() != y_alphabet.size())
    throw std::invalid_argument("GameSpec: marginal size mismatch");
  double sx = std::accumulate(px.begin(), px.end(), 0.0);
  double sy = std::accumulate(py.begin(), py.end(), 0.0);
  if (std::abs(sx - 1.0) > 1e-12 || std::abs(sy - 1.0) > 1e-12)
    throw std::invalid_argument("GameSpec: marginals do not sum to 1");
  auto check_sk = [&](const std::vector<std::vector<std::vector<int>>>& sk, size_t nout,
                      const char* which) {
    if (sk.size() != x_alphabet.size()) throw std::invalid_argument(std::string("GameSpec: bad ") + which);
    for (const auto& per_y : sk) {
      if (per_y.size() != y_alphabet.size()) throw std::invalid_argument(std::string("GameSpec: bad ") + which);
      for (const auto& bits : per_y) {
        if (bits.size() != nout) throw std::invalid_argument(std::string("GameSpec: bad ") + which);
        for (int v : bits)
          if (v != 0 && v != 1) throw std::invalid_argument(std::string("GameSpec: non-bit ") + which);
      }
    }
  };
  check_sk(sk_a, a_alphabet.size(), "sk_a");
  check_sk(sk_b, b_alphabet.size(), "sk_b");
}

GameSpec GameSpec::msg() {
  GameSpec g;
  g.name = "msg";
  g.x_alphabet = {"0", "1", "2"};
  g.y_alphabet = {"0", "1", "2"};
  g.a_alphabet = {"000", "011", "101", "110"};  // even parity
  g.b_alphabet = {"001", "010", "100", "111"};  // odd parity
  g.px.assign(3, 1.0 / 3.0);
  g.py.assign(3, 1.0 / 3.0);
  g.sk_a.assign(3, std::vector<std::vector<int>>(3, std::vector<int>(4)));
  g.sk_b.assign(3, std::vector<std::vector<int>>(3, std::vector<int>(4)));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int k = 0; k < 4; ++k) {
        g.sk_a[x][y][k] = g.a_alphabet[k][y] - '0';  // Alice keys on her y-th bit
        g.sk_b[x][y][k] = g.b_alphabet[k][x] - '0';  // Bob keys on his x-th bit
      }
  return g;
}

GameSpec GameSpec::chsh() {
  GameSpec g;
  g.name = "chsh";
  g.x_alphabet = {"0", "1"};
  g.y_alphabet = {"0", "1"};
  g.a_alphabet = {"0", "1"};
  g.b_alphabet = {"0", "1"};
  g.px.assign(2, 0.5);
  g.py.assign(2, 0.5);
  g.sk_a.assign(2, std::vector<std::vector<int>>(2, std::vector<int>(2)));
  g.sk_b.assign(2, std::vector<std::vector<int>>(2, std::vector<int>(2)));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int o = 0; o < 2; ++o) {
        g.sk_a[x][y][o] = o;
        g.sk_b[x][y][o] = o ^ (x & y);  // win iff a XOR b = x AND y
      }
  return g;
}

namespace {

long long llgcd(long long a, long long b) {
  while (b) { long long t = a % b; a = b; b = t; }
  return a < 0 ? -a : a;
}

// Lexicographic enumeration of deterministic tables; `tripartite` adds the
// per-cell best guess (max over c factorizes over (x,y) cells).
GameValue classical_value_impl(const GameSpec& game, bool tripartite) {
  game.validate();
  const int nx = game.nx(), ny = game.ny(), na = game.na(), nb = game.nb();
  double space = std::pow(static_cast<double>(na), nx) * std::pow(static_cast<double>(nb), ny);
  if (space > 1e7) throw std::invalid_argument("classical_value: search space exceeds 1e7");
  const bool uniform = game.uniform_pi();

  std::vector<int> ta(nx, 0), tb(ny, 0);
  long long best_wins = -1;
  double best_val = -1.0;
  const long long cells = static_cast<long long>(nx) * ny;

  auto advance = [](std::vector<int>& t, int base) {
    for (int i = static_cast<int>(t.size()) - 1; i >= 0; --i) {
      if (++t[i] < base) return true;
      t[i] = 0;
    }
    return false;
  };

  bool more_a = true;
  while (more_a) {
    std::fill(tb.begin(), tb.end(), 0);
    bool more_b = true;
    while (more_b) {
      long long wins = 0;
      double val = 0.0;
      for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) {
          int w = game.predicate(x, y, ta[x], tb[y]);
          // the guesser can always announce c = sk_a, so the cell wins iff
          // the bipartite predicate holds
          (void)tripartite;
          if (uniform) wins += w;
          else val += game.pi(x, y) * w;
        }
      if (uniform) best_wins = std::max(best_wins, wins);
      else best_val = std::max(best_val, val);
      more_b = advance(tb, nb);
    }
    more_a = advance(ta, na);
  }

  GameValue out;
  if (uniform) {
    long long g = llgcd(best_wins, cells);
    out.exact = true;
    out.rational = {best_wins / g, cells / g};
    out.v = out.rational.value();
  } else {
    out.exact = false;
    out.v = best_val;
  }
  return out;
}

}  // namespace

GameValue classical_value(const GameSpec& game) { return classical_value_impl(game, false); }

GameValue classical_value_tripartite(const GameSpec& game) {
  return classical_value_impl(game, true);
}

double classical_win_prob(const GameSpec& game, const ClassicalStrategy& mix) {
  game.validate();
  double wsum = 0.0;
  for (const auto& s : mix) wsum += s.weight;
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("classical_win_prob: weights do not sum to 1");
  double val = 0.0;
  for (const auto& s : mix) {
    if (static_cast<int>(s.table_a.size()) != game.nx() ||
        static_cast<int>(s.table_b.size()) != game.ny())
      throw std::invalid_argument("classical_win_prob: table size mismatch");
    for (int x = 0; x < game.nx(); ++x)
      for (int y = 0; y < game.ny(); ++y) {
        int a = s.table_a[x], b = s.table_b[y];
        if (a < 0 || a >= game.na() || b < 0 || b >= game.nb())
          throw std::invalid_argument("classical_win_prob: output outside alphabet");
        int w = game.predicate(x, y, a, b);
        if (w && !s.table_c.empty() && s.table_c[x][y] != game.sk_a[x][y][a]) w = 0;
        val += s.weight * game.pi(x, y) * w;
      }
  }
  return val;
}

void QuantumStrategy::validate() const {
  state.validate();
  if (dim_a * dim_b != state.dim)
    throw std::invalid_argument("QuantumStrategy: dim_a*dim_b != state dim");
  auto check = [](const std::vector<std::vector<CMatrix>>& povms, int dim, const char* side) {
    for (const auto& povm : povms) {
      CMatrix sum = CMatrix::zeros(dim, dim);
      for (const auto& el : povm) {
        if (el.rows != dim || el.cols != dim)
          throw std::invalid_argument(std::string("QuantumStrategy: POVM dim mismatch on ") + side);
        if (!qmath::is_hermitian(el, qmath::kStructuralTol))
          throw std::invalid_argument(std::string("QuantumStrategy: non-Hermitian POVM on ") + side);
        sum += el;
      }
      if (qmath::max_abs_diff(sum, CMatrix::identity(dim)) > qmath::kStructuralTol)
        throw std::invalid_argument(std::string("QuantumStrategy: incomplete POVM on ") + side);
    }
  };
  check(povms_a, dim_a, "A");
  check(povms_b, dim_b, "B");
}

double quantum_win_prob(const GameSpec& game, const QuantumStrategy& strat) {
  game.validate();
  strat.validate();
  if (static_cast<int>(strat.povms_a.size()) != game.nx() ||
      static_cast<int>(strat.povms_b.size()) != game.ny())
    throw std::invalid_argument("quantum_win_prob: POVM family size mismatch");
  double val = 0.0;
  for (int x = 0; x < game.nx(); ++x) {
    if (static_cast<int>(strat.povms_a[x].size()) != game.na())
      throw std::invalid_argument("quantum_win_prob: POVM outcome count mismatch");
    for (int y = 0; y < game.ny(); ++y) {
      if (static_cast<int>(strat.povms_b[y].size()) != game.nb())
        throw std::invalid_argument("quantum_win_prob: POVM outcome count mismatch");
      for (int a = 0; a < game.na(); ++a)
        for (int b = 0; b < game.nb(); ++b) {
          if (!game.predicate(x, y, a, b)) continue;
          val += game.pi(x, y) *
                 qmath::expectation(strat.state, qmath::kron(strat.povms_a[x][a], strat.povms_b[y][b]));
        }
    }
  }
  if (val < -qmath::kStructuralTol || val > 1.0 + qmath::kStructuralTol)
    throw std::invalid_argument("quantum_win_prob: value outside [0,1]");
  return std::clamp(val, 0.0, 1.0);
}

double qber(const GameSpec& game, const QuantumStrategy& strat) {
  return 1.0 - quantum_win_prob(game, strat);
}

double msg_expected_win(double q) { return 1.0 - (2.0 / 9.0) * q * (7.0 - 5.0 * q); }

namespace {

using qmath::pauli;

// Magic-square observable table; entry (x,y) is measured by Alice on input x
// (her y-th output bit) and by Bob on input y (his x-th output bit).
// Rows multiply to +I, columns to -I.
CMatrix msg_observable(int x, int y) {
  const CMatrix I = pauli('I'), X = pauli('X'), Y = pauli('Y'), Z = pauli('Z');
  using qmath::kron;
  switch (x * 3 + y) {
    case 0: return kron(I, Z);
    case 1: return kron(Z, I);
    case 2: return kron(Z, Z);
    case 3: return kron(X, I);
    case 4: return kron(I, X);
    case 5: return kron(X, X);
    case 6: return kron(X, Z) * cplx(-1.0);
    case 7: return kron(Z, X) * cplx(-1.0);
    case 8: return kron(Y, Y);
  }
  throw std::logic_error("msg_observable: bad index");
}

// Outcome bit o corresponds to eigenvalue (-1)^o.
CMatrix half_projector(const CMatrix& obs, int bit) {
  const CMatrix id = CMatrix::identity(obs.rows);
  return (bit == 0 ? id + obs : id - obs) * 0.5;
}

// Combined state of two pairs, given per-pair 4x4 operators on (A1,B1) and
// (A2,B2), assembled in global qubit order A1 A2 B1 B2.
CMatrix pair_product(const CMatrix& p1, const CMatrix& p2) {
  CMatrix m(16, 16);
  for (int a1 = 0; a1 < 2; ++a1) for (int a2 = 0; a2 < 2; ++a2)
  for (int b1 = 0; b1 < 2; ++b1) for (int b2 = 0; b2 < 2; ++b2)
  for (int c1 = 0; c1 < 2; ++c1) for (int c2 = 0; c2 < 2; ++c2)
  for (int d1 = 0; d1 < 2; ++d1) for (int d2 = 0; d2 < 2; ++d2) {
    int row = ((a1 * 2 + a2) * 2 + b1) * 2 + b2;
    int col = ((c1 * 2 + c2) * 2 + d1) * 2 + d2;
    m.at(row, col) = p1.at(a1 * 2 + b1, c1 * 2 + d1) * p2.at(a2 * 2 + b2, c2 * 2 + d2);
  }
  return m;
}

CMatrix bell_phi_plus_pair() {
  // |Phi+><Phi+| on one qubit pair
  CMatrix m(4, 4);
  for (int i : {0, 3})
    for (int j : {0, 3}) m.at(i, j) = 0.5;
  return m;
}

}  // namespace

QuantumStrategy msg_honest_strategy() {
  QuantumStrategy s;
  s.dim_a = 4;
  s.dim_b = 4;
  s.two_pair_structure = true;
  s.state = QState(16, pair_product(bell_phi_plus_pair(), bell_phi_plus_pair()));

  const GameSpec g = GameSpec::msg();
  s.povms_a.resize(3);
  s.povms_b.resize(3);
  for (int x = 0; x < 3; ++x) {
    for (int k = 0; k < 4; ++k) {  // even-parity outcome labels
      CMatrix p = CMatrix::identity(4);
      for (int y = 0; y < 3; ++y)
        p = p * half_projector(msg_observable(x, y), g.a_alphabet[k][y] - '0');
      s.povms_a[x].push_back(p);
    }
  }
  for (int y = 0; y < 3; ++y) {
    for (int k = 0; k < 4; ++k) {  // odd-parity outcome labels
      CMatrix p = CMatrix::identity(4);
      for (int x = 0; x < 3; ++x)
        p = p * half_projector(msg_observable(x, y), g.b_alphabet[k][x] - '0');
      s.povms_b[y].push_back(p);
    }
  }
  s.validate();
  return s;
}

QuantumStrategy chsh_honest_strategy() {
  QuantumStrategy s;
  s.dim_a = 2;
  s.dim_b = 2;
  s.state = QState(4, bell_phi_plus_pair());

  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix Z = pauli('Z'), X = pauli('X');
  const CMatrix obs_a[2] = {Z, X};
  const CMatrix obs_b[2] = {(Z + X) * r, (Z - X) * r};
  s.povms_a.resize(2);
  s.povms_b.resize(2);
  for (int x = 0; x < 2; ++x)
    for (int o = 0; o < 2; ++o) s.povms_a[x].push_back(half_projector(obs_a[x], o));
  for (int y = 0; y < 2; ++y)
    for (int o = 0; o < 2; ++o) s.povms_b[y].push_back(half_projector(obs_b[y], o));
  s.validate();
  return s;
}

namespace {

// (1-2q) rho + 2q tau_pair (x) Tr_pair[rho] on the given pair of qubits
// (global order A1 A2 B1 B2; pair 0 = {A1,B1}, pair 1 = {A2,B2}).
CMatrix depolarize_pair(const CMatrix& rho, int pair, double q) {
  const std::vector<int> dims{2, 2, 2, 2};
  const std::vector<int> traced = pair == 0 ? std::vector<int>{0, 2} : std::vector<int>{1, 3};
  CMatrix sigma = qmath::partial_trace(rho, dims, traced);  // 4x4 on the kept pair
  CMatrix mixed(16, 16);
  for (int a1 = 0; a1 < 2; ++a1) for (int a2 = 0; a2 < 2; ++a2)
  for (int b1 = 0; b1 < 2; ++b1) for (int b2 = 0; b2 < 2; ++b2)
  for (int c1 = 0; c1 < 2; ++c1) for (int c2 = 0; c2 < 2; ++c2)
  for (int d1 = 0; d1 < 2; ++d1) for (int d2 = 0; d2 < 2; ++d2) {
    int row = ((a1 * 2 + a2) * 2 + b1) * 2 + b2;
    int col = ((c1 * 2 + c2) * 2 + d1) * 2 + d2;
    if (pair == 0) {
      if (a1 != c1 || b1 != d1) continue;
      mixed.at(row, col) = 0.25 * sigma.at(a2 * 2 + b2, c2 * 2 + d2);
    } else {
      if (a2 != c2 || b2 != d2) continue;
      mixed.at(row, col) = 0.25 * sigma.at(a1 * 2 + b1, c1 * 2 + d1);
    }
  }
  return rho * (1.0 - 2.0 * q) + mixed * (2.0 * q);
}

}  // namespace

QuantumStrategy apply_depolarizing(const QuantumStrategy& strat, double q, bool per_pair) {
  if (q < 0.0 || q > 0.5) throw std::invalid_argument("apply_depolarizing: q outside [0,1/2]");
  QuantumStrategy out = strat;
  if (per_pair) {
    if (!strat.two_pair_structure || strat.state.dim != 16)
      throw std::invalid_argument("apply_depolarizing: state not declared as two 4-dim pairs");
    CMatrix rho = strat.state.density;
    rho = depolarize_pair(rho, 0, q);
    rho = depolarize_pair(rho, 1, q);
    out.state = QState(16, rho);
  } else {
    const int d = strat.state.dim;
    out.state = QState(d, strat.state.density * (1.0 - 2.0 * q) +
                              CMatrix::identity(d) * (2.0 * q / d));
  }
  out.state.validate();
  return out;
}

double verify_pi_simplification(const QuantumStrategy& ab,
                                const std::vector<qmath::CMatrix>& f0_per_xy) {
  ab.validate();
  const GameSpec g = GameSpec::msg();
  if (static_cast<int>(f0_per_xy.size()) != g.nx() * g.ny())
    throw std::invalid_argument("verify_pi_simplification: need one guesser element per input pair");
  const int dc = f0_per_xy[0].rows;
  const CMatrix Ic = CMatrix::identity(dc);
  const CMatrix Ia = CMatrix::identity(ab.dim_a);
  const CMatrix Ib = CMatrix::identity(ab.dim_b);
  using qmath::kron;

  double dev = 0.0;
  for (int x = 0; x < g.nx(); ++x)
    for (int y = 0; y < g.ny(); ++y) {
      const CMatrix& f0 = f0_per_xy[x * g.ny() + y];
      if (f0.rows != dc || f0.cols != dc)
        throw std::invalid_argument("verify_pi_simplification: guesser dims differ");
      const CMatrix f1 = Ic - f0;

      std::vector<int> a1, b0;  // outcomes keying to 1 (Alice) resp. 0 (Bob)
      for (int a = 0; a < g.na(); ++a)
        if (g.sk_a[x][y][a] == 1) a1.push_back(a);
      for (int b = 0; b < g.nb(); ++b)
        if (g.sk_b[x][y][b] == 0) b0.push_back(b);
      if (a1.size() != 2 || b0.size() != 2)
        throw std::invalid_argument("verify_pi_simplification: key bits must split outcomes 2/2");

      CMatrix suma1 = CMatrix::zeros(ab.dim_a, ab.dim_a);
      CMatrix sumb0 = CMatrix::zeros(ab.dim_b, ab.dim_b);
      for (int a : a1) suma1 += ab.povms_a[x][a];
      for (int b : b0) sumb0 += ab.povms_b[y][b];
      const CMatrix suma0 = Ia - suma1;
      const CMatrix sumb1 = Ib - sumb0;

      // definition: sum over the guess bit of F_c (x) A_c (x) B_c
      CMatrix lhs = kron(kron(f0, suma0), sumb0);
      lhs += kron(kron(f1, suma1), sumb1);

      // rearranged three-term form
      CMatrix rhs = CMatrix::zeros(lhs.rows, lhs.cols);
      for (int a : a1)
        for (int b : b0) {
          rhs += kron(kron(f0 * 0.5, Ia), ab.povms_b[y][b]);
          rhs += kron(kron(f1 * 0.5, ab.povms_a[x][a]), Ib);
          rhs += kron(kron(Ic, ab.povms_a[x][a]), ab.povms_b[y][b]) * cplx(-1.0);
        }
      dev = std::max(dev, qmath::max_abs_diff(lhs, rhs));
    }
  return dev;
}

}  // namespace nlgqkd::games
