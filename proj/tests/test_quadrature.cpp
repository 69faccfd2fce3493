#include <doctest.h>

#include <cmath>
#include <vector>

#include "sira/error.hpp"
#include "sira/quadrature.hpp"

using namespace sira;

TEST_CASE("adaptive Simpson integrates smooth functions to tolerance") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(adaptive_simpson([](double x) { return x * std::log(x + 1e-300); }, 0.0, 1.0) ==
        doctest::Approx(-0.25).epsilon(1e-9));
}

TEST_CASE("empty and reversed intervals") {
  CHECK(adaptive_simpson([](double) { return 1.0; }, 0.3, 0.3) == 0.0);
  const std::vector<double> none;
  CHECK(integrate_piecewise([](double) { return 1.0; }, 1.0, 0.0, none) ==
        doctest::Approx(-1.0));
}

TEST_CASE("breakpoints sit on panel boundaries") {
  auto kink = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> cuts{0.3, 5.0};
  const double exact = 0.5 * 0.09 + 0.5 * 0.49;
  CHECK(std::abs(integrate_piecewise(kink, 0.0, 1.0, cuts) - exact) < 1e-12);
}

TEST_CASE("non-convergence is a numeric error") {
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  CHECK_THROWS_AS(adaptive_simpson(wild, 0.0, 1.0, QuadratureOptions{1e-14, 3}), NumericError);
}
