#ifndef NLGQKD_ENTROPY_HPP
#define NLGQKD_ENTROPY_HPP

#include <string>
#include <utility>
#include <vector>

namespace nlgqkd::entropy {

// Binary entropy, bits; h(0) = h(1) = 0 by continuity.
double binary_entropy(double p);

// Affine per-round entropy lower bound g(p) = slope*p + intercept.
struct AffineBound {
  double slope = 0.0;
  double intercept = 0.0;
  double operator()(double p) const { return slope * p + intercept; }
};

// Tangent at beta to -log2(1 - p + omega3):
//   g(p) = (p - beta)/(ln2 * (1 - beta + omega3)) - log2(1 - beta + omega3)
AffineBound affine_moe_bound(double beta, double omega3);

// Piecewise-linear bound curve built from an ingested point table.
//
// Segment convention (the source formula's index bookkeeping is ambiguous;
// this is the reading that keeps the evaluator continuous and on the correct
// side of every ingested point): knot values v0 = v1 = y0; for j >= 1 the
// piece on [x_j, x_{j+1}] starts at v_j with the slope of the chord through
// points (j-1, j); past the last knot the final slope extends. Two-point
// tables degenerate to the single chord.
struct BoundCurve {
  enum class Kind { tripartite_win_upper, vn_lower };
  Kind kind;
  std::vector<std::pair<double, double>> points;  // (x_k, y_k), x increasing
  std::vector<double> knots;                      // evaluator values at x_k
  std::string provenance;                         // source digest, if ingested

  double x_min() const { return points.front().first; }
  double x_max() const { return points.back().first; }
  double eval(double x) const;
  // slope of the piece to the right of x (right-segment convention at knots)
  double right_slope(double x) const;
};

BoundCurve build_tripartite_upper_curve(std::vector<std::pair<double, double>> points,
                                        std::string provenance = "");
BoundCurve build_vn_lower_curve(std::vector<std::pair<double, double>> points,
                                std::string provenance = "");

// CSV ingest: header "omega_ab,value", sidecar comment "# kind=...".
// Monotonicity/convexity violations are rejected with the offending row.
BoundCurve load_curve_csv(const std::string& path);

// g_cons(p) = (1 - h'(beta))(p - beta)/(ln2 (1 - beta + h(beta)))
//             - log2(1 - beta + h(beta))
AffineBound constrained_affine_bound(double beta, const BoundCurve& h);

// Line touching the curve at beta with the curve's (right) slope there.
AffineBound tangent_of_curve(const BoundCurve& curve, double beta);

// Min-tradeoff function for the spot-checking channel sequence:
//   f(delta_0) = g(1) + (1/gamma)(g(0) - g(1)),  f(delta_1) = f(bot) = g(1).
// Statistics are the lemma's bounds, not exact values.
struct MinTradeoff {
  double f0, f1, fbot;
  double gamma;
  double g_max, g_min;     // g(1), g(0)
  double max_f;            // = g_max
  double min_f;            // = (1 - 1/gamma) g_max + (1/gamma) g_min
  double min_sigma_f;      // reported bound: g_min
  double var_f;            // reported bound: (1/gamma)(g_max - g_min)^2
};

MinTradeoff min_tradeoff_from_g(const AffineBound& g, double gamma);

}  // namespace nlgqkd::entropy

#endif
