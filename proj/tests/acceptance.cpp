// Acceptance harness: one PASS/FAIL line per criterion, exit 1 on any FAIL.
// Usage: acceptance [data_dir]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nlgqkd/entropy.hpp"
#include "nlgqkd/games.hpp"
#include "nlgqkd/keyrate.hpp"
#include "nlgqkd/protocol.hpp"
#include "nlgqkd/rng.hpp"

using namespace nlgqkd;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

void report_skip(int idx, const char* what, const std::string& why) {
  std::printf("SKIP criterion %2d: %s -- %s\n", idx, what, why.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

constexpr double kOmega3 = 8.00077 / 9.0;

// ------------------------------------------------------------------------
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  games::GameValue msg2 = games::classical_value(games::GameSpec::msg());
  games::GameValue msg3 = games::classical_value_tripartite(games::GameSpec::msg());
  games::GameValue chsh = games::classical_value(games::GameSpec::chsh());
  double elapsed = seconds_since(t0);
  bool ok = msg2.exact && msg2.rational.num == 8 && msg2.rational.den == 9 && msg3.exact &&
            msg3.rational.num == 8 && msg3.rational.den == 9 && chsh.exact &&
            chsh.rational.num == 3 && chsh.rational.den == 4 && elapsed < 5.0;
  char d[128];
  std::snprintf(d, sizeof d, "msg %lld/%lld, tripartite %lld/%lld, chsh %lld/%lld, %.2fs",
                msg2.rational.num, msg2.rational.den, msg3.rational.num, msg3.rational.den,
                chsh.rational.num, chsh.rational.den, elapsed);
  report(1, "exact classical values by brute force", ok, d);
}

void criterion_2() {
  games::GameSpec msg = games::GameSpec::msg();
  games::QuantumStrategy honest = games::msg_honest_strategy();
  double worst = std::abs(games::quantum_win_prob(msg, honest) - 1.0);
  bool ok = worst <= 1e-10;
  double grid_worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    double q = 0.5 * i / 49.0;
    games::QuantumStrategy s = games::apply_depolarizing(honest, q, true);
    grid_worst = std::max(grid_worst,
                          std::abs(games::quantum_win_prob(msg, s) - games::msg_expected_win(q)));
  }
  ok = ok && grid_worst <= 1e-9;
  double chsh_dev = std::abs(games::quantum_win_prob(games::GameSpec::chsh(),
                                                     games::chsh_honest_strategy()) -
                             (2.0 + std::sqrt(2.0)) / 4.0);
  ok = ok && chsh_dev <= 1e-10;
  char d[128];
  std::snprintf(d, sizeof d, "|msg-1|=%.1e, grid dev %.1e, chsh dev %.1e", worst, grid_worst,
                chsh_dev);
  report(2, "honest quantum values vs closed forms", ok, d);
}

void criterion_3() {
  games::QuantumStrategy s = games::msg_honest_strategy();
  rng::Stream rs(2024, 0);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<qmath::CMatrix> f0;
    for (int k = 0; k < 9; ++k) {
      // random guesser POVM element: R R^dagger scaled into [0, I]
      qmath::CMatrix r(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          r.at(i, j) = qmath::cplx(rs.uniform() - 0.5, rs.uniform() - 0.5);
      qmath::CMatrix m = r * r.dagger();
      double tr = m.trace().real();
      f0.push_back(m * qmath::cplx(1.0 / (tr + 1e-6)));
    }
    worst = std::max(worst, games::verify_pi_simplification(s, f0));
  }
  char d[64];
  std::snprintf(d, sizeof d, "max operator deviation %.2e", worst);
  report(3, "test-round operator rearrangement identity", worst <= 1e-10, d);
}

void criterion_4() {
  rng::Stream rs(404, 0);
  bool ok = true;
  std::string why;
  for (int rep = 0; rep < 100 && ok; ++rep) {
    entropy::AffineBound g{3.0 * rs.uniform(), 2.0 * rs.uniform() - 1.5};
    double gamma = 0.001 + 0.999 * rs.uniform();
    entropy::MinTradeoff f = entropy::min_tradeoff_from_g(g, gamma);
    const double g1 = g(1.0), g0 = g(0.0);
    // the function's extreme values over the three channel symbols
    double fmax = std::max({f.f0, f.f1, f.fbot});
    double fmin = std::min({f.f0, f.f1, f.fbot});
    if (std::abs(f.max_f - g1) > 1e-12 || std::abs(fmax - g1) > 1e-9) {
      ok = false;
      why = "max relation";
    }
    double want_min = (1.0 - 1.0 / gamma) * g1 + (1.0 / gamma) * g0;
    if (std::abs(f.min_f - want_min) > 1e-9 * std::max(1.0, std::abs(want_min)) ||
        std::abs(fmin - want_min) > 1e-9 * std::max(1.0, std::abs(want_min))) {
      ok = false;
      why = "min relation";
    }
    // sigma-restricted minimum: expectation over test-round mixtures never
    // drops below g(0); scan the mixture weight
    double min_sigma = 1e300, max_var = 0.0;
    for (int i = 0; i <= 200; ++i) {
      double w = gamma * i / 200.0;  // weight on the losing test symbol
      double mean = w * f.f0 + (gamma - w) * f.f1 + (1.0 - gamma) * f.fbot;
      min_sigma = std::min(min_sigma, mean);
      double var = w * (f.f0 - mean) * (f.f0 - mean) +
                   (1.0 - w) * (f.f1 - mean) * (f.f1 - mean);
      max_var = std::max(max_var, var);
    }
    if (min_sigma < f.min_sigma_f - 1e-9) {
      ok = false;
      why = "sigma-minimum bound violated";
    }
    if (max_var > f.var_f + 1e-9 * std::max(1.0, f.var_f)) {
      ok = false;
      why = "variance bound violated";
    }
  }
  report(4, "min-tradeoff statistics for 100 random bounds", ok, why);
}

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  keyrate::BoundSource src;
  src.omega3 = kOmega3;
  std::vector<double> rates;
  bool monotone = true;
  for (int e = 6; e <= 15; ++e) {
    const double n = std::pow(10.0, e);
    keyrate::ProtocolParams frame;
    frame.n = n;
    frame.delta_tol = std::pow(n, -1.0 / 3.0);
    frame.gamma = keyrate::default_gamma(1.0, frame.delta_tol, n, 1e-2);
    frame.omega_exp = 1.0;
    keyrate::KeyRateReport r =
        keyrate::optimize_finite_rate(src, 1.0, frame, 1e-6, 1e-6, 1e-2, 1e-2);
    if (!rates.empty() && r.rate < rates.back() - 1e-12) monotone = false;
    rates.push_back(r.rate);
  }
  double elapsed = seconds_since(t0);
  double final_dev = std::abs(rates.back() - 0.16991);
  bool ok = monotone && final_dev <= 1e-3 && elapsed < 10.0;
  char d[128];
  std::snprintf(d, sizeof d, "rate(1e15)=%.6f, |dev|=%.1e, monotone=%d, %.2fs", rates.back(),
                final_dev, monotone ? 1 : 0, elapsed);
  report(5, "finite-key convergence to the asymptote", ok, d);
}

void criterion_6() {
  auto cells =
      keyrate::positivity_region({1.0, (2.0 + std::sqrt(2.0)) / 4.0}, {8.0 / 9.0, 0.75}, 1.1);
  bool msg_pos = false, chsh_neg = false;
  for (const auto& c : cells) {
    if (c.omega2 == 1.0 && c.omega3 == 8.0 / 9.0) msg_pos = c.positive;
    if (c.omega2 == (2.0 + std::sqrt(2.0)) / 4.0 && c.omega3 == 0.75) chsh_neg = !c.positive;
  }
  report(6, "positivity region marker points", msg_pos && chsh_neg,
         msg_pos ? (chsh_neg ? "" : "chsh cell positive") : "msg cell negative");
}

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  games::GameSpec msg = games::GameSpec::msg();
  games::QuantumStrategy s = games::apply_depolarizing(games::msg_honest_strategy(), 0.01, true);
  protocol::DevicePair dev = protocol::honest_devices(msg, s);
  keyrate::ProtocolParams p;
  p.n = 2e4;
  p.omega_exp = games::msg_expected_win(0.01);
  p.delta_tol = std::pow(p.n, -1.0 / 3.0);
  p.gamma = keyrate::completeness_gamma(p.omega_exp, p.delta_tol, p.n, 1e-2);
  p.l_ec = 0;
  p.l_key = 0;
  protocol::CompletenessStats st = protocol::monte_carlo_completeness(msg, dev, p, 1000, 777);
  double elapsed = seconds_since(t0);
  bool ok = st.pe_abort_rate <= 1e-2 + st.ci95_halfwidth && elapsed < 120.0;
  char d[128];
  std::snprintf(d, sizeof d, "gamma=%.4f, pe aborts %d/1000, ci %.4f, %.1fs", p.gamma,
                st.pe_aborts, st.ci95_halfwidth, elapsed);
  report(7, "empirical completeness of honest noisy devices", ok, d);
}

void criterion_8() {
  protocol::CorrectnessStats st = protocol::monte_carlo_correctness(16, 100000, 4242);
  bool ok = st.pass_rate <= st.bound;
  char d[128];
  std::snprintf(d, sizeof d, "passes %d/100000 (rate %.2e, bound %.2e)", st.hash_passes,
                st.pass_rate, st.bound);
  report(8, "forced-mismatch hash-pass rate under the 2-universal bound", ok, d);
}

void criterion_9() {
  bool ok = true;
  std::string why;
  for (int n : {10, 16}) {
    rng::Stream rs(9000 + n, 0);
    protocol::LinearCode code = protocol::LinearCode::random(rs, n, n - 4, 2);
    const uint64_t mask = (1ull << n) - 1;
    for (uint64_t e0 = 0; e0 <= mask && ok; ++e0) {
      if (__builtin_popcountll(e0) > 2) continue;
      const uint64_t z = code.synd(0);  // sent word 0, received e0
      // maximum-likelihood oracle: global minimum-weight pattern matching the
      // syndrome difference, flagged ambiguous on ties
      const uint64_t target = z ^ code.synd(e0);
      int best_w = 65;
      uint64_t best_e = 0;
      bool unique = false;
      for (uint64_t e = 0; e <= mask; ++e) {
        if (code.synd(e) != target) continue;
        int w = __builtin_popcountll(e);
        if (w < best_w) {
          best_w = w;
          best_e = e;
          unique = true;
        } else if (w == best_w) {
          unique = false;
        }
      }
      if (unique && best_e == e0) {
        if (code.corr(e0, z) != 0) {
          ok = false;
          why = "decoder missed a uniquely correctable pattern, n=" + std::to_string(n);
        }
      }
    }
  }
  report(9, "bounded decoder matches the maximum-likelihood oracle", ok, why);
}

void criterion_10() {
  keyrate::BoundSource src;
  src.omega3 = kOmega3;
  const double xi = 1.0;
  double q_bis = keyrate::robustness_threshold(src, xi);
  // scan oracle on a million-point grid using the closed-form envelope
  auto rate_at = [&](double q) {
    const double w = games::msg_expected_win(q);
    return -std::log2(1.0 - w + kOmega3) - xi * entropy::binary_entropy(1.0 - w);
  };
  double q_scan = 0.0;
  for (long i = 0; i < 1000000; ++i) {
    double q = 0.5 * (i + 0.5) / 1000000.0;
    if (rate_at(q) > 0.0) q_scan = q;
    else break;
  }
  bool ok = std::abs(q_bis - q_scan) <= 1e-5;
  char d[96];
  std::snprintf(d, sizeof d, "bisection %.7f vs scan %.7f", q_bis, q_scan);
  report(10, "robustness threshold vs scan oracle (affine bound)", ok, d);
  report_skip(10, "threshold bracket from an ingested min-entropy table",
              "no authoritative relaxation-derived table is shipped; the bundled example "
              "tables are illustrative only");
}

void criterion_11(const std::string& data_dir) {
  bool ok = true;
  std::string why;
  std::vector<entropy::BoundCurve> curves;
  try {
    curves.push_back(entropy::load_curve_csv(data_dir + "/msg_tripartite_upper_example.csv"));
    curves.push_back(entropy::load_curve_csv(data_dir + "/msg_vn_lower_example.csv"));
  } catch (const std::exception& e) {
    ok = false;
    why = e.what();
  }
  curves.push_back(entropy::build_tripartite_upper_curve(
      {{8.0 / 9.0, 8.0 / 9.0}, {0.95, 0.8}, {1.0, 0.5}}));
  curves.push_back(entropy::build_vn_lower_curve({{0.9, 0.1}, {0.94, 0.2}, {1.0, 0.9}}));
  for (const auto& c : curves) {
    const bool upper = c.kind == entropy::BoundCurve::Kind::tripartite_win_upper;
    for (const auto& [x, y] : c.points) {
      double v = c.eval(x);
      if (upper && v < y - 1e-12) {
        ok = false;
        why = "upper curve below a point";
      }
      if (!upper && v > y + 1e-12) {
        ok = false;
        why = "lower curve above a point";
      }
      double lo = std::max(c.x_min(), x - 1e-14), hi = std::min(c.x_max(), x + 1e-14);
      if (std::abs(c.eval(lo) - c.eval(hi)) > 1e-12) {
        ok = false;
        why = "discontinuity at a breakpoint";
      }
    }
  }
  report(11, "curve constructions bound their tables and stay continuous", ok, why);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string data_dir = argc > 1 ? argv[1] : "data";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11(data_dir);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
