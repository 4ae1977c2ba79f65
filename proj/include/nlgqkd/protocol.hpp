#ifndef NLGQKD_PROTOCOL_HPP
#define NLGQKD_PROTOCOL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlgqkd/games.hpp"
#include "nlgqkd/keyrate.hpp"
#include "nlgqkd/rng.hpp"

namespace nlgqkd::protocol {

using BitVec = std::vector<uint8_t>;  // one bit per element

std::string bits_to_hex(const BitVec& bits);
BitVec hex_to_bits(const std::string& hex, size_t nbits);

// GF(2)-linear Toeplitz hash; seed has in_len + out_len - 1 bits,
// T[i][j] = seed[i - j + in_len - 1].
struct ToeplitzHash {
  int in_len = 0;
  int out_len = 0;
  BitVec seed;

  static ToeplitzHash random(rng::Stream& rs, int in_len, int out_len);
  BitVec operator()(const BitVec& input) const;
};

// Random linear code over blocks of n <= 64 bits; decoding is a brute-force
// search over error patterns of weight <= radius (minimum weight first,
// lexicographic masks within a weight class).
struct LinearCode {
  int n = 0;
  int radius = 3;
  std::vector<uint64_t> rows;  // parity rows as bit masks

  static LinearCode random(rng::Stream& rs, int n, int lambda, int radius = 3);
  uint64_t synd(uint64_t s) const;
  // min-weight e within radius with synd(s_b ^ e) == z, or s_b unchanged
  uint64_t corr(uint64_t s_b, uint64_t z) const;
};

// Pair of devices answering jointly per round; honest devices are i.i.d.
// samplers of the strategy's outcome distribution for each input pair.
struct DevicePair {
  int na = 0, nb = 0;
  std::function<std::pair<int, int>(int64_t round, int x, int y, rng::Stream& rs)> sample;
};

DevicePair honest_devices(const games::GameSpec& game, const games::QuantumStrategy& strat);
DevicePair deterministic_devices(const games::GameSpec& game, std::vector<int> table_a,
                                 std::vector<int> table_b);

struct Transcript {
  uint64_t seed = 0;
  int64_t n = 0;
  std::vector<uint8_t> x, y, t, a, b, sa, sb;
  std::vector<int8_t> c;  // 0/1 on test rounds, -1 (bottom) otherwise
  bool pe_pass = false;
  bool ec_pass = false;
  BitVec syndrome, hash_a, hash_b;
  BitVec key_a, key_b;  // empty when aborted
  bool aborted() const { return !pe_pass || !ec_pass; }
  std::string to_json() const;
};

// Executes one run: measurement (Bob samples T_i with Pr=gamma, inputs
// uniform per the game's marginals), sifting, parameter estimation
// (|{i in test: C_i = 0}| <= (1 - omega_exp + delta_tol) gamma n), one-way
// error correction (block code if supplied with code->n == n, identity
// corrector otherwise) with l_ec-bit hash verification, and Toeplitz
// privacy amplification to params.l_key bits.
Transcript run_protocol(const games::GameSpec& game, const DevicePair& devices,
                        const keyrate::ProtocolParams& params, const LinearCode* code,
                        uint64_t seed);

struct CompletenessStats {
  int trials = 0;
  int pe_aborts = 0;
  int ec_aborts = 0;
  double pe_abort_rate = 0.0;
  double total_abort_rate = 0.0;
  double ci95_halfwidth = 0.0;  // binomial normal approximation, PE aborts
};

CompletenessStats monte_carlo_completeness(const games::GameSpec& game, const DevicePair& devices,
                                           const keyrate::ProtocolParams& params, int trials,
                                           uint64_t seed);

struct CorrectnessStats {
  int trials = 0;
  int hash_passes = 0;
  double pass_rate = 0.0;
  double bound = 0.0;  // 2^-l_ec + 3 sigma
};

// Forces S_A != S_B and measures how often the l_ec-bit verification hash
// still passes.
CorrectnessStats monte_carlo_correctness(int l_ec, int trials, uint64_t seed, int key_len = 64);

}  // namespace nlgqkd::protocol

#endif
