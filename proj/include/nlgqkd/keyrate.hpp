#ifndef NLGQKD_KEYRATE_HPP
#define NLGQKD_KEYRATE_HPP

#include <cstdint>
#include <vector>

#include "nlgqkd/entropy.hpp"

namespace nlgqkd::keyrate {

// Epsilon budget. eps_s splits as delta = eps_s - eps_s_prime - 2 eps_s_dprime,
// which must stay positive. pedagogical() fixes eps_a = eps_sec/2,
// eps_s_prime = eps_s/2, eps_s_dprime = eps_s/8 (so delta = eps_s/4).
struct SecurityBudget {
  double eps_sec, eps_corr, eps_com_pe, eps_com_ec;
  double eps_s, eps_s_prime, eps_s_dprime, eps_a;

  static SecurityBudget pedagogical(double eps_sec, double eps_corr, double eps_com_pe,
                                    double eps_com_ec, double eps_s);
  void validate() const;
  double smoothing_delta() const { return eps_s - eps_s_prime - 2.0 * eps_s_dprime; }
};

struct ProtocolParams {
  double n = 0;             // rounds
  double gamma = 0;         // testing probability
  double delta_tol = 0;     // PE tolerance
  double omega_exp = 0;     // expected winning probability
  double lambda_ec = 0;     // syndrome bits
  long long l_ec = 0;       // verification-hash bits
  double xi = 1.1;          // EC efficiency factor
  long long l_key = 0;      // PA output length (simulation only)
  void validate() const;
};

struct GeatConstants {
  double d1, d0, eta, V;
};

struct KeyRateReport {
  double l_key = 0.0;  // integer-valued, clamped >= 0
  double rate = 0.0;
  double d1 = 0.0, d0 = 0.0, kappa = 0.0, theta_term = 0.0;
  bool feasible = false;
  double beta = 0.0;   // optimizer echo
  double eps_s = 0.0;  // optimizer echo
};

// Theorem-level testing probability from the multiplicative Chernoff bound:
//   gamma = (2(1 - omega_exp) + delta_tol)/(delta_tol^2 n) * ln(1/eps)
double completeness_gamma(double omega_exp, double delta_tol, double n, double eps_com_pe);

// Default sweep gamma: the Chernoff bound floored at n^{-1/3} (the bound's
// own asymptotic scale; any larger gamma preserves completeness) and clamped
// to (0, 1].
double default_gamma(double omega_exp, double delta_tol, double n, double eps_com_pe);

long long min_lec_for_correctness(double eps_corr);

// theta(delta) = -log2(1 - sqrt(1 - delta^2))
double theta(double delta);

// kappa >= sqrt(-ln eps_s'') / sqrt(n)
double kappa_min(double n, double eps_s_dprime);

GeatConstants geat_constants(const entropy::AffineBound& g, double gamma,
                             const SecurityBudget& budget);

// Finite key length:
//   l <= n g(omega_exp - delta_tol) - d1 sqrt(n) - d0
//        - (2 - omega_exp + delta_tol) n (gamma + kappa)
//        - 2 theta(delta) - l_ec - lambda_ec - 2 log2(1/(eps_sec - 2 eps_s))
// floored to an integer and clamped at 0; `conservative` subtracts 2 more bits.
KeyRateReport finite_key_length(const entropy::AffineBound& g, const ProtocolParams& params,
                                const SecurityBudget& budget, bool conservative = false);

// g(omega_exp) - xi * h(Q)
double asymptotic_rate(const entropy::AffineBound& g, double omega_exp, double Q, double xi);

// h_bound - h(Q)
double devetak_winter(double h_bound, double Q);

// Source of the per-round bound for the optimizer: either the plain affine
// family (tangents to -log2(1 - p + omega3)) or tangents of a constrained
// curve at beta.
struct BoundSource {
  bool use_curve = false;
  double omega3 = 0.0;                  // affine family parameter
  const entropy::BoundCurve* curve = nullptr;  // tripartite_win_upper curve
  entropy::AffineBound at(double beta) const;
  double beta_min() const;
  double beta_max(double omega2) const;
};

// Maximizes l_key over beta (golden-section, 1e-6 width) and eps_s (60-point
// log grid in (0, eps_sec/2)) with the pedagogical split; exhaustive mode
// also grids eps_s_prime and eps_s_dprime fractions.
KeyRateReport optimize_finite_rate(const BoundSource& src, double omega2,
                                   const ProtocolParams& frame, double eps_sec, double eps_corr,
                                   double eps_com_pe, double eps_com_ec,
                                   bool exhaustive = false);

struct RegionCell {
  double omega2, omega3;
  bool positive;
};

// Cell positive iff max_beta g(omega2) - xi h(1 - omega2) > 0.
std::vector<RegionCell> positivity_region(const std::vector<double>& omega2_grid,
                                          const std::vector<double>& omega3_grid, double xi);

// Bisection root (tolerance 1e-5 in q) of the asymptotic magic-square rate
// under per-pair depolarizing noise, with beta optimized per q.
double robustness_threshold(const BoundSource& src, double xi);

}  // namespace nlgqkd::keyrate

#endif
