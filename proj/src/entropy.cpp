#include "nlgqkd/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlgqkd::entropy {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kShapeSlack = 1e-9;  // monotonicity/convexity slack on ingest
double log2d(double v) { return std::log(v) / kLn2; }
}  // namespace

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * log2d(p) - (1.0 - p) * log2d(1.0 - p);
}

AffineBound affine_moe_bound(double beta, double omega3) {
  if (omega3 < 0.0 || beta < omega3 || beta > 1.0)
    throw std::invalid_argument("affine_moe_bound: need 0 <= omega3 <= beta <= 1");
  const double denom = 1.0 - beta + omega3;
  if (denom <= 0.0) throw std::invalid_argument("affine_moe_bound: 1 - beta + omega3 <= 0");
  AffineBound g;
  g.slope = 1.0 / (kLn2 * denom);
  g.intercept = -g.slope * beta - log2d(denom);
  return g;
}

namespace {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

BoundCurve build_curve(BoundCurve::Kind kind, std::vector<std::pair<double, double>> points,
                       std::string provenance) {
  const auto n = points.size();
  if (n < 2) throw std::invalid_argument("bound curve: need at least 2 points");
  const bool upper = kind == BoundCurve::Kind::tripartite_win_upper;
  for (size_t k = 0; k < n; ++k) {
    auto [x, y] = points[k];
    if (k > 0 && x <= points[k - 1].first)
      throw std::invalid_argument("bound curve: x not strictly increasing at row " +
                                  std::to_string(k));
    if (upper && (y < -kShapeSlack || y > 1.0 + kShapeSlack))
      throw std::invalid_argument("bound curve: value outside [0,1] at row " + std::to_string(k));
  }
  if (points[0].first < 8.0 / 9.0 - 1e-9)
    throw std::invalid_argument("bound curve: domain must start at or above 8/9");
  for (size_t k = 1; k < n; ++k) {
    double dy = points[k].second - points[k - 1].second;
    if (upper ? dy > kShapeSlack : dy < -kShapeSlack)
      throw std::invalid_argument("bound curve: monotonicity violated at row " + std::to_string(k));
  }
  for (size_t k = 2; k < n; ++k) {
    double s_prev = (points[k - 1].second - points[k - 2].second) /
                    (points[k - 1].first - points[k - 2].first);
    double s_next =
        (points[k].second - points[k - 1].second) / (points[k].first - points[k - 1].first);
    // upper curves must be concave, lower curves convex
    if (upper ? s_next > s_prev + kShapeSlack : s_next < s_prev - kShapeSlack)
      throw std::invalid_argument("bound curve: convexity violated at row " + std::to_string(k));
  }

  BoundCurve c;
  c.kind = kind;
  c.points = std::move(points);
  c.provenance = std::move(provenance);
  if (n == 2) {
    // degenerate: the single chord through both points
    c.knots = {c.points[0].second, c.points[1].second};
    return c;
  }
  c.knots.assign(n, 0.0);
  c.knots[0] = c.knots[1] = c.points[0].second;
  for (size_t j = 1; j + 1 < n; ++j) {
    double s = (c.points[j].second - c.points[j - 1].second) /
               (c.points[j].first - c.points[j - 1].first);
    c.knots[j + 1] = c.knots[j] + s * (c.points[j + 1].first - c.points[j].first);
  }
  return c;
}

}  // namespace

double BoundCurve::eval(double x) const {
  if (x < x_min() - 1e-12) throw std::invalid_argument("BoundCurve: x below domain");
  const auto n = points.size();
  // locate the piece [x_j, x_{j+1}] containing x (last piece extends right)
  size_t j = 0;
  while (j + 2 < n && x >= points[j + 1].first) ++j;
  if (x > points[j + 1].first) j = n - 2;  // beyond the last knot
  return knots[j] + right_slope(points[j].first) * (x - points[j].first);
}

double BoundCurve::right_slope(double x) const {
  if (x < x_min() - 1e-12) throw std::invalid_argument("BoundCurve: x below domain");
  const auto n = points.size();
  size_t j = 0;
  while (j + 2 < n && x >= points[j + 1].first) ++j;
  if (n == 2) {
    return (points[1].second - points[0].second) / (points[1].first - points[0].first);
  }
  if (j == 0) return 0.0;  // constant first piece
  return (points[j].second - points[j - 1].second) / (points[j].first - points[j - 1].first);
}

BoundCurve build_tripartite_upper_curve(std::vector<std::pair<double, double>> points,
                                        std::string provenance) {
  return build_curve(BoundCurve::Kind::tripartite_win_upper, std::move(points),
                     std::move(provenance));
}

BoundCurve build_vn_lower_curve(std::vector<std::pair<double, double>> points,
                                std::string provenance) {
  return build_curve(BoundCurve::Kind::vn_lower, std::move(points), std::move(provenance));
}

BoundCurve load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::istringstream lines(text);
  std::string line;
  std::string kind_str;
  bool header_seen = false;
  std::vector<std::pair<double, double>> pts;
  size_t row = 0;      // physical line number
  size_t data_row = 0; // 1-based index among point rows, matches curve errors
  while (std::getline(lines, line)) {
    ++row;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("kind=");
      if (pos != std::string::npos) kind_str = line.substr(pos + 5);
      continue;
    }
    if (!header_seen) {
      if (line != "omega_ab,value")
        throw std::invalid_argument(path + ": expected header 'omega_ab,value' at row " +
                                    std::to_string(row));
      header_seen = true;
      continue;
    }
    ++data_row;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument(path + ": malformed row " + std::to_string(data_row));
    try {
      size_t used = 0;
      double x = std::stod(line.substr(0, comma), &used);
      std::string rest = line.substr(comma + 1);
      double y = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing junk");
      pts.emplace_back(x, y);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ": malformed row " + std::to_string(data_row));
    }
  }
  BoundCurve::Kind kind;
  if (kind_str == "tripartite_win_upper") kind = BoundCurve::Kind::tripartite_win_upper;
  else if (kind_str == "vn_lower") kind = BoundCurve::Kind::vn_lower;
  else throw std::invalid_argument(path + ": missing or unknown '# kind=' line");

  char digest[32];
  std::snprintf(digest, sizeof digest, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return build_curve(kind, std::move(pts), path + " " + digest);
}

AffineBound constrained_affine_bound(double beta, const BoundCurve& h) {
  if (h.kind != BoundCurve::Kind::tripartite_win_upper)
    throw std::invalid_argument("constrained_affine_bound: needs a tripartite_win_upper curve");
  if (beta < h.x_min() || beta > h.x_max())
    throw std::invalid_argument("constrained_affine_bound: beta outside curve domain");
  const double hb = h.eval(beta);
  const double hp = h.right_slope(beta);
  const double denom = 1.0 - beta + hb;
  if (denom <= 0.0) throw std::invalid_argument("constrained_affine_bound: 1 - beta + h(beta) <= 0");
  AffineBound g;
  g.slope = (1.0 - hp) / (kLn2 * denom);
  g.intercept = -g.slope * beta - log2d(denom);
  return g;
}

AffineBound tangent_of_curve(const BoundCurve& curve, double beta) {
  if (beta < curve.x_min() || beta > curve.x_max())
    throw std::invalid_argument("tangent_of_curve: beta outside curve domain");
  AffineBound t;
  t.slope = curve.right_slope(beta);
  t.intercept = curve.eval(beta) - t.slope * beta;
  return t;
}

MinTradeoff min_tradeoff_from_g(const AffineBound& g, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0 + 1e-15))
    throw std::invalid_argument("min_tradeoff_from_g: gamma outside (0,1]");
  if (g.slope < 0.0)
    throw std::invalid_argument("min_tradeoff_from_g: g must be nondecreasing");
  MinTradeoff f;
  f.gamma = gamma;
  f.g_max = g(1.0);
  f.g_min = g(0.0);
  f.f1 = f.fbot = f.g_max;
  f.f0 = f.g_max + (f.g_min - f.g_max) / gamma;
  f.max_f = f.g_max;
  f.min_f = (1.0 - 1.0 / gamma) * f.g_max + (1.0 / gamma) * f.g_min;
  f.min_sigma_f = f.g_min;
  f.var_f = (1.0 / gamma) * (f.g_max - f.g_min) * (f.g_max - f.g_min);
  return f;
}

}  // namespace nlgqkd::entropy
