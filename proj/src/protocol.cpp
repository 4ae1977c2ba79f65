#include "nlgqkd/protocol.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "nlgqkd/parallel.hpp"

namespace nlgqkd::protocol {

std::string bits_to_hex(const BitVec& bits) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (size_t j = 0; j < 4 && i + j < bits.size(); ++j) v |= (bits[i + j] & 1) << (3 - j);
    out.push_back(digits[v]);
  }
  return out;
}

BitVec hex_to_bits(const std::string& hex, size_t nbits) {
  BitVec out(nbits, 0);
  for (size_t i = 0; i < nbits; ++i) {
    size_t d = i / 4;
    if (d >= hex.size()) throw std::invalid_argument("hex_to_bits: string too short");
    char c = hex[d];
    int v = c >= '0' && c <= '9' ? c - '0'
          : c >= 'a' && c <= 'f' ? c - 'a' + 10
          : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                 : throw std::invalid_argument("hex_to_bits: bad digit");
    out[i] = (v >> (3 - i % 4)) & 1;
  }
  return out;
}

ToeplitzHash ToeplitzHash::random(rng::Stream& rs, int in_len, int out_len) {
  ToeplitzHash h;
  h.in_len = in_len;
  h.out_len = out_len;
  h.seed.resize(in_len + out_len - 1 > 0 ? in_len + out_len - 1 : 0);
  for (auto& b : h.seed) b = static_cast<uint8_t>(rs.bits() & 1);
  return h;
}

BitVec ToeplitzHash::operator()(const BitVec& input) const {
  if (static_cast<int>(input.size()) != in_len)
    throw std::invalid_argument("ToeplitzHash: input length mismatch");
  BitVec out(out_len, 0);
  for (int i = 0; i < out_len; ++i) {
    uint8_t acc = 0;
    for (int j = 0; j < in_len; ++j) acc ^= seed[i - j + in_len - 1] & input[j];
    out[i] = acc;
  }
  return out;
}

LinearCode LinearCode::random(rng::Stream& rs, int n, int lambda, int radius) {
  if (n < 1 || n > 64) throw std::invalid_argument("LinearCode: n must be in [1,64]");
  if (lambda < 0 || lambda > 64) throw std::invalid_argument("LinearCode: lambda must be in [0,64]");
  LinearCode c;
  c.n = n;
  c.radius = radius;
  const uint64_t mask = n == 64 ? ~0ull : (1ull << n) - 1;
  for (int r = 0; r < lambda; ++r) c.rows.push_back(rs.bits() & mask);
  return c;
}

uint64_t LinearCode::synd(uint64_t s) const {
  uint64_t z = 0;
  for (size_t r = 0; r < rows.size(); ++r)
    z |= static_cast<uint64_t>(__builtin_popcountll(rows[r] & s) & 1) << r;
  return z;
}

uint64_t LinearCode::corr(uint64_t s_b, uint64_t z) const {
  const uint64_t target = z ^ synd(s_b);  // need synd(e) == target
  if (target == 0) return s_b;
  if (radius >= 1)
    for (int i = 0; i < n; ++i) {
      uint64_t e = 1ull << i;
      if (synd(e) == target) return s_b ^ e;
    }
  if (radius >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        uint64_t e = (1ull << i) | (1ull << j);
        if (synd(e) == target) return s_b ^ e;
      }
  if (radius >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          uint64_t e = (1ull << i) | (1ull << j) | (1ull << k);
          if (synd(e) == target) return s_b ^ e;
        }
  return s_b;  // decoding failure; verification hash will catch it
}

DevicePair honest_devices(const games::GameSpec& game, const games::QuantumStrategy& strat) {
  game.validate();
  strat.validate();
  const int nx = game.nx(), ny = game.ny(), na = game.na(), nb = game.nb();
  // full joint outcome distribution per input pair, computed once
  auto cdf = std::make_shared<std::vector<std::vector<double>>>(nx * ny);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      std::vector<double>& c = (*cdf)[x * ny + y];
      c.reserve(na * nb);
      double acc = 0.0;
      for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
          double p = qmath::expectation(strat.state,
                                        qmath::kron(strat.povms_a[x][a], strat.povms_b[y][b]));
          acc += std::max(0.0, p);
          c.push_back(acc);
        }
      if (std::abs(acc - 1.0) > 1e-9)
        throw std::invalid_argument("honest_devices: outcome distribution does not normalize");
      for (double& v : c) v /= acc;
    }
  DevicePair d;
  d.na = na;
  d.nb = nb;
  d.sample = [cdf, na, nb, ny](int64_t, int x, int y, rng::Stream& rs) {
    const std::vector<double>& c = (*cdf)[x * ny + y];
    const double u = rs.uniform();
    int k = 0;
    while (k + 1 < static_cast<int>(c.size()) && u >= c[k]) ++k;
    return std::make_pair(k / nb, k % nb);
  };
  return d;
}

DevicePair deterministic_devices(const games::GameSpec& game, std::vector<int> table_a,
                                 std::vector<int> table_b) {
  if (static_cast<int>(table_a.size()) != game.nx() ||
      static_cast<int>(table_b.size()) != game.ny())
    throw std::invalid_argument("deterministic_devices: table size mismatch");
  DevicePair d;
  d.na = game.na();
  d.nb = game.nb();
  d.sample = [ta = std::move(table_a), tb = std::move(table_b)](int64_t, int x, int y,
                                                                rng::Stream&) {
    return std::make_pair(ta[x], tb[y]);
  };
  return d;
}

namespace {
// rng stream ids within one protocol run
enum : uint64_t { kStreamInputs = 0, kStreamDevices = 1, kStreamEcHash = 2, kStreamPa = 3 };

int sample_marginal(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}
}  // namespace

Transcript run_protocol(const games::GameSpec& game, const DevicePair& devices,
                        const keyrate::ProtocolParams& params, const LinearCode* code,
                        uint64_t seed) {
  params.validate();
  if (code && code->n != params.n)
    throw std::invalid_argument("run_protocol: code block length must equal n");
  const int64_t n = static_cast<int64_t>(params.n);
  Transcript tr;
  tr.seed = seed;
  tr.n = n;
  tr.x.resize(n); tr.y.resize(n); tr.t.resize(n);
  tr.a.resize(n); tr.b.resize(n);
  tr.sa.resize(n); tr.sb.resize(n);
  tr.c.resize(n);

  // measurement and sifting
  rng::Stream rin(seed, kStreamInputs), rdev(seed, kStreamDevices);
  int64_t test_losses = 0;
  for (int64_t i = 0; i < n; ++i) {
    const int x = sample_marginal(game.px, rin.uniform());
    const int y = sample_marginal(game.py, rin.uniform());
    const bool test = rin.bernoulli(params.gamma);
    auto [a, b] = devices.sample(i, x, y, rdev);
    tr.x[i] = static_cast<uint8_t>(x);
    tr.y[i] = static_cast<uint8_t>(y);
    tr.t[i] = test ? 1 : 0;
    tr.a[i] = static_cast<uint8_t>(a);
    tr.b[i] = static_cast<uint8_t>(b);
    tr.sa[i] = static_cast<uint8_t>(game.sk_a[x][y][a]);
    tr.sb[i] = static_cast<uint8_t>(game.sk_b[x][y][b]);
    if (test) {
      tr.c[i] = static_cast<int8_t>(game.predicate(x, y, a, b));
      if (tr.c[i] == 0) ++test_losses;
    } else {
      tr.c[i] = -1;
    }
  }

  // parameter estimation
  tr.pe_pass = static_cast<double>(test_losses) <=
               (1.0 - params.omega_exp + params.delta_tol) * params.gamma * params.n;
  if (!tr.pe_pass) {
    tr.ec_pass = false;
    return tr;
  }

  // error correction: syndrome (if a block code is wired in) + hash check
  BitVec sb_hat(tr.sb.begin(), tr.sb.end());
  if (code) {
    uint64_t wa = 0, wb = 0;
    for (int64_t i = 0; i < n; ++i) {
      wa |= static_cast<uint64_t>(tr.sa[i]) << i;
      wb |= static_cast<uint64_t>(tr.sb[i]) << i;
    }
    const uint64_t z = code->synd(wa);
    const uint64_t wb_hat = code->corr(wb, z);
    tr.syndrome.resize(code->rows.size());
    for (size_t r = 0; r < code->rows.size(); ++r) tr.syndrome[r] = (z >> r) & 1;
    for (int64_t i = 0; i < n; ++i) sb_hat[i] = (wb_hat >> i) & 1;
  }
  rng::Stream rec(seed, kStreamEcHash);
  if (params.l_ec > 0) {
    ToeplitzHash h = ToeplitzHash::random(rec, static_cast<int>(n), static_cast<int>(params.l_ec));
    BitVec sa(tr.sa.begin(), tr.sa.end());
    tr.hash_a = h(sa);
    tr.hash_b = h(sb_hat);
    tr.ec_pass = tr.hash_a == tr.hash_b;
  } else {
    tr.ec_pass = true;
  }
  if (!tr.ec_pass) return tr;

  // privacy amplification
  if (params.l_key > 0) {
    rng::Stream rpa(seed, kStreamPa);
    ToeplitzHash h = ToeplitzHash::random(rpa, static_cast<int>(n), static_cast<int>(params.l_key));
    BitVec sa(tr.sa.begin(), tr.sa.end());
    tr.key_a = h(sa);
    tr.key_b = h(sb_hat);
  }
  return tr;
}

std::string Transcript::to_json() const {
  nlohmann::json pub, priv, j;
  pub["seed"] = seed;
  pub["n"] = n;
  pub["x"] = std::vector<int>(x.begin(), x.end());
  pub["y"] = std::vector<int>(y.begin(), y.end());
  pub["t"] = bits_to_hex(BitVec(t.begin(), t.end()));
  BitVec test_sa;
  for (int64_t i = 0; i < n; ++i)
    if (t[i]) test_sa.push_back(sa[i]);
  pub["announced_test_bits"] = bits_to_hex(test_sa);
  pub["syndrome"] = bits_to_hex(syndrome);
  pub["hash_a"] = bits_to_hex(hash_a);
  pub["hash_b"] = bits_to_hex(hash_b);
  pub["pe_pass"] = pe_pass;
  pub["ec_pass"] = ec_pass;

  priv["a"] = std::vector<int>(a.begin(), a.end());
  priv["b"] = std::vector<int>(b.begin(), b.end());
  priv["sa"] = bits_to_hex(BitVec(sa.begin(), sa.end()));
  priv["sb"] = bits_to_hex(BitVec(sb.begin(), sb.end()));
  if (!aborted() && !key_a.empty()) {
    priv["key_a"] = bits_to_hex(key_a);
    priv["key_b"] = bits_to_hex(key_b);
  }
  j["public"] = pub;
  j["private"] = priv;
  return j.dump(2);
}

CompletenessStats monte_carlo_completeness(const games::GameSpec& game, const DevicePair& devices,
                                           const keyrate::ProtocolParams& params, int trials,
                                           uint64_t seed) {
  std::atomic<int> pe{0}, ec{0};
  parallel::parallel_for(trials, [&](int64_t tr) {
    Transcript t = run_protocol(game, devices, params, nullptr, rng::derive(seed, tr));
    if (!t.pe_pass) ++pe;
    else if (!t.ec_pass) ++ec;
  });
  CompletenessStats s;
  s.trials = trials;
  s.pe_aborts = pe.load();
  s.ec_aborts = ec.load();
  s.pe_abort_rate = static_cast<double>(s.pe_aborts) / trials;
  s.total_abort_rate = static_cast<double>(s.pe_aborts + s.ec_aborts) / trials;
  s.ci95_halfwidth =
      1.96 * std::sqrt(std::max(s.pe_abort_rate * (1.0 - s.pe_abort_rate), 1.0 / trials) / trials);
  return s;
}

CorrectnessStats monte_carlo_correctness(int l_ec, int trials, uint64_t seed, int key_len) {
  std::atomic<int> passes{0};
  parallel::parallel_for(trials, [&](int64_t tr) {
    rng::Stream rs(rng::derive(seed, tr), 0);
    BitVec sa(key_len), sb;
    for (auto& bit : sa) bit = static_cast<uint8_t>(rs.bits() & 1);
    sb = sa;
    sb[rs.below(key_len)] ^= 1;  // forced mismatch
    ToeplitzHash h = ToeplitzHash::random(rs, key_len, l_ec);
    if (h(sa) == h(sb)) ++passes;
  });
  CorrectnessStats s;
  s.trials = trials;
  s.hash_passes = passes.load();
  s.pass_rate = static_cast<double>(s.hash_passes) / trials;
  const double p = std::pow(2.0, -l_ec);
  s.bound = p + 3.0 * std::sqrt(p * (1.0 - p) / trials);
  return s;
}

}  // namespace nlgqkd::protocol
