#include "sira/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sira/error.hpp"

namespace sira {
namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw NumericError("adaptive_simpson: no convergence on [" + std::to_string(p.a) + ", " +
                       std::to_string(p.b) + "] at depth limit");
  }
  return refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        QuadratureOptions opts) {
  if (a == b) return 0.0;
  if (!(opts.abs_tol > 0.0) || opts.max_depth < 1) {
    throw DomainError("adaptive_simpson: tolerance must be positive and depth >= 1");
  }
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  return refine(f, {a, fa, m, fm, b, fb, simpson(a, fa, fm, b, fb)}, opts.abs_tol,
                opts.max_depth);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, QuadratureOptions opts) {
  if (a == b) return 0.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> cuts{lo};
  for (double x : breakpoints) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(hi);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureOptions panel = opts;
    panel.abs_tol = opts.abs_tol * (cuts[i + 1] - cuts[i]) / (hi - lo);
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], panel);
  }
  return a <= b ? total : -total;
}

}  // namespace sira
