#pragma once

#include <functional>
#include <span>

namespace sira {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 50;
};

// Adaptive Simpson on [a, b]. Throws NumericError if any panel still fails
// the error test at max_depth.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        QuadratureOptions opts = {});

// Same, but splits [a, b] at every breakpoint strictly inside it so that kinks
// in a piecewise integrand sit on panel boundaries. The tolerance is shared
// across panels in proportion to their width.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, QuadratureOptions opts = {});

}  // namespace sira
