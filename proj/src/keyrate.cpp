#include "nlgqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlgqkd::keyrate {

namespace {
constexpr double kLn2 = 0.6931471805599453;
double log2d(double v) { return std::log(v) / kLn2; }

double golden_max(double lo, double hi, double tol, const auto& f) {
  const double inv_phi = 2.0 / (1.0 + std::sqrt(5.0));
  if (hi < lo) std::swap(lo, hi);
  if (hi - lo < tol) return 0.5 * (lo + hi);
  double c = hi - (hi - lo) * inv_phi;
  double d = lo + (hi - lo) * inv_phi;
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d; d = c; fd = fc;
      c = hi - (hi - lo) * inv_phi;
      fc = f(c);
    } else {
      lo = c; c = d; fc = fd;
      d = lo + (hi - lo) * inv_phi;
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace

SecurityBudget SecurityBudget::pedagogical(double eps_sec, double eps_corr, double eps_com_pe,
                                           double eps_com_ec, double eps_s) {
  SecurityBudget b;
  b.eps_sec = eps_sec;
  b.eps_corr = eps_corr;
  b.eps_com_pe = eps_com_pe;
  b.eps_com_ec = eps_com_ec;
  b.eps_s = eps_s;
  b.eps_a = eps_sec / 2.0;
  b.eps_s_prime = eps_s / 2.0;
  b.eps_s_dprime = eps_s / 8.0;
  b.validate();
  return b;
}

void SecurityBudget::validate() const {
  auto prob = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0))
      throw std::invalid_argument(std::string("SecurityBudget: ") + name + " outside (0,1]");
  };
  prob(eps_sec, "eps_sec");
  prob(eps_corr, "eps_corr");
  prob(eps_com_pe, "eps_com_pe");
  prob(eps_com_ec, "eps_com_ec");
  prob(eps_s, "eps_s");
  prob(eps_s_prime, "eps_s_prime");
  prob(eps_s_dprime, "eps_s_dprime");
  prob(eps_a, "eps_a");
  if (!(eps_s < eps_sec / 2.0))
    throw std::invalid_argument("SecurityBudget: need eps_s < eps_sec/2");
  if (!(eps_a <= eps_sec / 2.0))
    throw std::invalid_argument("SecurityBudget: need eps_a <= eps_sec/2");
  if (!(smoothing_delta() > 0.0))
    throw std::invalid_argument("SecurityBudget: eps_s - eps_s' - 2 eps_s'' must be positive");
}

void ProtocolParams::validate() const {
  if (!(n >= 1.0)) throw std::invalid_argument("ProtocolParams: n < 1");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("ProtocolParams: gamma outside (0,1]");
  if (!(delta_tol > 0.0)) throw std::invalid_argument("ProtocolParams: delta_tol <= 0");
  if (!(omega_exp >= 0.0 && omega_exp <= 1.0))
    throw std::invalid_argument("ProtocolParams: omega_exp outside [0,1]");
  if (lambda_ec < 0 || l_ec < 0)
    throw std::invalid_argument("ProtocolParams: negative EC size");
}

double completeness_gamma(double omega_exp, double delta_tol, double n, double eps_com_pe) {
  if (!(delta_tol > 0.0)) throw std::invalid_argument("completeness_gamma: delta_tol <= 0");
  if (!(n >= 1.0)) throw std::invalid_argument("completeness_gamma: n < 1");
  if (!(eps_com_pe > 0.0 && eps_com_pe <= 1.0))
    throw std::invalid_argument("completeness_gamma: eps outside (0,1]");
  return (2.0 * (1.0 - omega_exp) + delta_tol) / (delta_tol * delta_tol * n) *
         std::log(1.0 / eps_com_pe);
}

double default_gamma(double omega_exp, double delta_tol, double n, double eps_com_pe) {
  double g = std::max(completeness_gamma(omega_exp, delta_tol, n, eps_com_pe),
                      std::pow(n, -1.0 / 3.0));
  return std::min(g, 1.0);
}

long long min_lec_for_correctness(double eps_corr) {
  if (!(eps_corr > 0.0 && eps_corr <= 1.0))
    throw std::invalid_argument("min_lec_for_correctness: eps outside (0,1]");
  return static_cast<long long>(std::ceil(log2d(1.0 / eps_corr) - 1e-12));
}

double theta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("theta: delta outside (0,1]");
  if (delta == 1.0) return 0.0;
  double s = std::sqrt((1.0 - delta) * (1.0 + delta));
  // 1 - sqrt(1 - d^2) computed stably as d^2/(1 + sqrt(1 - d^2))
  return -log2d(delta * delta / (1.0 + s));
}

double kappa_min(double n, double eps_s_dprime) {
  if (!(n >= 1.0)) throw std::invalid_argument("kappa_min: n < 1");
  if (!(eps_s_dprime > 0.0 && eps_s_dprime <= 1.0))
    throw std::invalid_argument("kappa_min: eps outside (0,1]");
  return std::sqrt(-std::log(eps_s_dprime)) / std::sqrt(n);
}

GeatConstants geat_constants(const entropy::AffineBound& g, double gamma,
                             const SecurityBudget& budget) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("geat_constants: gamma outside (0,1]");
  if (g.slope < 0.0) throw std::invalid_argument("geat_constants: g must be nondecreasing");
  budget.validate();
  GeatConstants c;
  c.eta = 2.0 * kLn2 / (1.0 + 2.0 * kLn2);
  const double dg = g(1.0) - g(0.0);
  c.V = log2d(17.0) + std::sqrt(2.0 + dg * dg / gamma);
  const double log_eps_a = log2d(1.0 / budget.eps_a);
  const double th = theta(budget.eps_s_prime);
  c.d1 = std::sqrt((2.0 * kLn2 * c.V * c.V / c.eta) * (th + (2.0 - c.eta) * log_eps_a));
  const double e2 = std::exp(2.0);
  const double p = 2.0 + dg;
  c.d0 = (((2.0 - c.eta) * c.eta * c.eta * log_eps_a + c.eta * c.eta * th) /
          (3.0 * kLn2 * kLn2 * c.V * c.V * std::pow(2.0 * c.eta - 1.0, 3.0))) *
         std::pow(2.0, (1.0 - c.eta) / c.eta * p) * std::pow(std::log(std::pow(2.0, p) + e2), 3.0);
  return c;
}

KeyRateReport finite_key_length(const entropy::AffineBound& g, const ProtocolParams& params,
                                const SecurityBudget& budget, bool conservative) {
  params.validate();
  budget.validate();
  if (!(budget.eps_sec - 2.0 * budget.eps_s > 0.0))
    throw std::invalid_argument("finite_key_length: eps_sec - 2 eps_s <= 0");
  const GeatConstants c = geat_constants(g, params.gamma, budget);
  const double kappa = kappa_min(params.n, budget.eps_s_dprime);
  const double th = theta(budget.smoothing_delta());
  const double n = params.n;
  double l = n * g(params.omega_exp - params.delta_tol) - c.d1 * std::sqrt(n) - c.d0 -
             (2.0 - params.omega_exp + params.delta_tol) * n * (params.gamma + kappa) -
             2.0 * th - static_cast<double>(params.l_ec) - params.lambda_ec -
             2.0 * log2d(1.0 / (budget.eps_sec - 2.0 * budget.eps_s));
  if (conservative) l -= 2.0;
  KeyRateReport r;
  r.d1 = c.d1;
  r.d0 = c.d0;
  r.kappa = kappa;
  r.theta_term = th;
  r.feasible = l > 0.0;
  r.l_key = std::max(0.0, std::floor(l));
  r.rate = r.l_key / n;
  r.eps_s = budget.eps_s;
  return r;
}

double asymptotic_rate(const entropy::AffineBound& g, double omega_exp, double Q, double xi) {
  return g(omega_exp) - xi * entropy::binary_entropy(Q);
}

double devetak_winter(double h_bound, double Q) {
  if (Q < 0.0 || Q > 0.5) throw std::invalid_argument("devetak_winter: Q outside [0,1/2]");
  return h_bound - entropy::binary_entropy(Q);
}

entropy::AffineBound BoundSource::at(double beta) const {
  if (use_curve) return entropy::constrained_affine_bound(beta, *curve);
  return entropy::affine_moe_bound(beta, omega3);
}

double BoundSource::beta_min() const { return use_curve ? curve->x_min() : omega3; }

double BoundSource::beta_max(double omega2) const {
  return use_curve ? std::min(omega2, curve->x_max()) : omega2;
}

KeyRateReport optimize_finite_rate(const BoundSource& src, double omega2,
                                   const ProtocolParams& frame, double eps_sec, double eps_corr,
                                   double eps_com_pe, double eps_com_ec, bool exhaustive) {
  const double blo = src.beta_min();
  const double bhi = src.beta_max(omega2);
  KeyRateReport best;
  best.l_key = 0.0;
  best.feasible = false;
  if (bhi <= blo) return best;

  auto eval = [&](double beta, const SecurityBudget& b) -> KeyRateReport {
    entropy::AffineBound g = src.at(beta);
    if (g.slope < 0.0) {
      KeyRateReport r;
      return r;
    }
    KeyRateReport r = finite_key_length(g, frame, b, false);
    r.beta = beta;
    r.eps_s = b.eps_s;
    return r;
  };

  std::vector<SecurityBudget> budgets;
  for (int i = 0; i < 60; ++i) {
    // log grid over (0, eps_sec/2)
    double eps_s = 0.4999 * eps_sec * std::pow(10.0, -9.0 * i / 59.0);
    budgets.push_back(
        SecurityBudget::pedagogical(eps_sec, eps_corr, eps_com_pe, eps_com_ec, eps_s));
  }
  if (exhaustive) {
    std::vector<SecurityBudget> extra;
    for (const auto& base : budgets)
      for (double fp : {0.1, 0.3, 0.5, 0.7})
        for (double fd : {0.02, 0.05, 0.1}) {
          if (base.eps_s * (1.0 - fp - 2.0 * fd) <= 0.0) continue;
          SecurityBudget b = base;
          b.eps_s_prime = base.eps_s * fp;
          b.eps_s_dprime = base.eps_s * fd;
          extra.push_back(b);
        }
    budgets.insert(budgets.end(), extra.begin(), extra.end());
  }

  for (const auto& b : budgets) {
    double beta_star = golden_max(blo, bhi, 1e-6,
                                  [&](double beta) { return eval(beta, b).l_key; });
    KeyRateReport r = eval(beta_star, b);
    // also probe the interval edges, the optimum often sits at beta = omega2
    for (double beta : {blo + 1e-12, bhi - 1e-12}) {
      KeyRateReport re = eval(beta, b);
      if (re.l_key > r.l_key) r = re;
    }
    if (r.l_key > best.l_key || (!best.feasible && r.feasible)) best = r;
  }
  return best;
}

std::vector<RegionCell> positivity_region(const std::vector<double>& omega2_grid,
                                          const std::vector<double>& omega3_grid, double xi) {
  std::vector<RegionCell> out;
  for (double w2 : omega2_grid)
    for (double w3 : omega3_grid) {
      if (w3 > w2) continue;
      // envelope of the tangent family at p = omega2 is attained at beta = omega2
      double gmax = -log2d(1.0 - w2 + w3);
      bool pos = gmax - xi * entropy::binary_entropy(1.0 - w2) > 0.0;
      out.push_back({w2, w3, pos});
    }
  return out;
}

namespace {
double msg_asymptotic_rate_at(const BoundSource& src, double q, double xi) {
  const double omega_exp = 1.0 - (2.0 / 9.0) * q * (7.0 - 5.0 * q);
  const double Q = 1.0 - omega_exp;
  const double blo = src.beta_min();
  const double bhi = src.beta_max(1.0);
  auto val = [&](double beta) { return src.at(beta)(omega_exp); };
  double beta_star = golden_max(blo, bhi, 1e-9, val);
  double g = val(beta_star);
  for (double beta : {blo, bhi, std::clamp(omega_exp, blo, bhi)}) g = std::max(g, val(beta));
  return g - xi * entropy::binary_entropy(Q);
}
}  // namespace

double robustness_threshold(const BoundSource& src, double xi) {
  double lo = 0.0, hi = 0.5;
  double rlo = msg_asymptotic_rate_at(src, lo, xi);
  double rhi = msg_asymptotic_rate_at(src, hi, xi);
  if (rlo <= 0.0) return 0.0;
  if (rhi > 0.0) return 0.5;
  while (hi - lo > 1e-7) {
    double mid = 0.5 * (lo + hi);
    if (msg_asymptotic_rate_at(src, mid, xi) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nlgqkd::keyrate
