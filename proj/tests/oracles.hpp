#pragma once

// Reference computations used only by tests. Everything here is derived from
// first principles (direct integration over lambda, brute-force search) and
// shares no code path with the library's closed forms or adaptive quadrature.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace sira::oracle {

// Composite Simpson with a fixed number of (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals = 2000) {
  if (b <= a) return 0.0;
  if (intervals % 2 == 1) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Simpson over [a, b] split at the given interior points.
inline double simpson_split(const std::function<double(double)>& f, double a, double b,
                            std::vector<double> cuts, int intervals = 2000) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(a, cuts[i]);
    const double hi = std::min(b, cuts[i + 1]);
    if (hi > lo) total += simpson(f, lo, hi, intervals);
  }
  return total;
}

inline double beta_cdf_raw(double x) { return 3 * x * x - 2 * x * x * x; }

// Beta(2,2) quantile from the trigonometric solution of 3x^2 - 2x^3 = u.
inline double beta_quantile_trig(double u) {
  return 0.5 - std::sin(std::asin(1.0 - 2.0 * u) / 3.0);
}

// V restricted to [p, 1], for the two value families ("uniform"/"beta").
struct TruncatedValue {
  bool beta;
  double p;

  double mass() const { return beta ? 1.0 - beta_cdf_raw(p) : 1.0 - p; }
  double pdf(double x) const {
    if (x < p || x > 1.0) return 0.0;
    return (beta ? 6.0 * x * (1.0 - x) : 1.0) / mass();
  }
  double cdf(double x) const {
    if (x <= p) return 0.0;
    if (x >= 1.0) return 1.0;
    return beta ? (beta_cdf_raw(x) - beta_cdf_raw(p)) / mass() : (x - p) / mass();
  }
};

// Density of V * lambda, lambda ~ U[0, 1/2], by integrating over lambda.
inline double product_pdf(const TruncatedValue& v, double y) {
  if (y <= 0.0) return product_pdf(v, 1e-300);
  const double lo = y;
  const double hi = std::min(y / v.p, 0.5);
  // The endpoints map to V = 1 and V = p exactly; clamp away round-off there.
  auto integrand = [&](double l) { return v.pdf(std::clamp(y / l, v.p, 1.0)) * 2.0 / l; };
  return simpson(integrand, lo, hi);
}

// P(V * lambda <= y) = ∫ 2 F_V(y / lambda) d lambda over [0, 1/2].
inline double product_cdf(const TruncatedValue& v, double y) {
  if (y <= 0.0) return 0.0;
  auto integrand = [&](double l) { return l <= y ? 2.0 : 2.0 * v.cdf(y / l); };
  return simpson_split(integrand, 0.0, 0.5, {y, std::min(0.5, y / v.p)});
}

inline double product_cdf_integral(const TruncatedValue& v, double y) {
  return simpson_split([&](double z) { return product_cdf(v, z); }, 0.0, y, {0.5 * v.p}, 400);
}

// Equilibrium bid via the first-order condition b'(x) = x f(x), b(0) = p.
inline double bid_by_foc(const TruncatedValue& v, double x) {
  return v.p + simpson_split([&](double z) { return z * product_pdf(v, z); }, 0.0, x, {0.5 * v.p}, 400);
}

// Reserve Thresholding utility: -b below p_eps, v_d - b at or above it.
inline double reserve_utility(double v_d, double p_eps, double b) {
  return b < p_eps ? -b : v_d - b;
}

struct GridSearchResult {
  double best_bid;
  double best_utility;
};

// argmax over b in {0, step, ..., 1}, also considering not participating (b = 0).
inline GridSearchResult reserve_grid_search(double v_d, double p_eps, double step = 1e-4) {
  GridSearchResult best{0.0, 0.0};
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= n; ++i) {
    const double b = i * step;
    const double u = reserve_utility(v_d, p_eps, b);
    if (u > best.best_utility) best = {b, u};
  }
  return best;
}

}  // namespace sira::oracle
