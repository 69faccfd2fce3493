#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "sira/error.hpp"
#include "sira/random.hpp"
#include "sira/value_model.hpp"

using namespace sira;

namespace {

const std::vector<double> kPrices{0.1, 0.25, 0.5, 0.75, 0.9};
const ValueFamily kFamilies[] = {ValueFamily::Uniform01, ValueFamily::Beta22};

oracle::TruncatedValue truncated(ValueFamily f, double p) {
  return {f == ValueFamily::Beta22, p};
}

}  // namespace

TEST_CASE("price of safety and its inverse") {
  CHECK(price_of_safety(SafetyCostModel(1.0), 0.5) == 0.5);
  CHECK(price_of_safety(SafetyCostModel(2.0), 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(price_of_safety(SafetyCostModel(1.0), 0.95) == 0.95);
  CHECK(safety_from_bid(SafetyCostModel(1.0), 0.3) == 0.3);
  CHECK(safety_from_bid(SafetyCostModel(2.0), 0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(safety_from_bid(SafetyCostModel(1.0), 1.0) == 1.0);

  CHECK_THROWS_AS(price_of_safety(SafetyCostModel(), 0.0), DomainError);
  CHECK_THROWS_AS(price_of_safety(SafetyCostModel(), 1.0), DomainError);
  CHECK_THROWS_AS(safety_from_bid(SafetyCostModel(), 0.0), DomainError);
  CHECK_THROWS_AS(safety_from_bid(SafetyCostModel(), 1.01), DomainError);
  CHECK_THROWS_AS(SafetyCostModel(0.0), DomainError);
}

TEST_CASE("cost model round trip") {
  for (double gamma : {0.5, 1.0, 1.7, 3.0}) {
    const SafetyCostModel m(gamma);
    for (int i = 1; i < 1000; ++i) {
      const double s = i / 1000.0;
      REQUIRE(std::abs(m.safety(m.cost(s)) - s) < 1e-12);
    }
    CHECK(m.cost(0.3) < m.cost(0.31));
  }
}

TEST_CASE("beta quantile inverts the cdf") {
  for (int i = 0; i <= 1000; ++i) {
    const double u = i / 1000.0;
    const double x = beta22_quantile(u);
    REQUIRE(std::abs(beta22_cdf(x) - u) < 1e-12);
    REQUIRE(std::abs(x - oracle::beta_quantile_trig(u)) < 1e-10);
  }
  CHECK(beta22_quantile(0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("valuation transforms") {
  const auto a = valuation_from_uniforms(ValueFamily::Uniform01, 0.8, 0.5);
  CHECK(a.total_value == 0.8);
  CHECK(a.scaling_factor == 0.25);
  CHECK(a.deployment_value == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(a.premium_value == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(a.deployment_value + a.premium_value == a.total_value);

  const auto b = valuation_from_uniforms(ValueFamily::Beta22, 0.5, 1.0);
  CHECK(b.total_value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(b.scaling_factor == 0.5);
  CHECK(b.premium_value == doctest::Approx(0.25).epsilon(1e-12));

  const auto c = valuation_from_uniforms(ValueFamily::Uniform01, 0.0, 0.3, 0.4);
  CHECK(c.total_value == 0.4);
}

TEST_CASE("beta population mean") {
  Stream rng = Stream::keyed(2024, {1});
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_agent_valuation(ValueFamily::Beta22, rng);
    REQUIRE(v.scaling_factor <= 0.5);
    sum += v.total_value;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.002);
}

TEST_CASE("participant draws stay above the price") {
  Stream rng(5);
  for (auto f : kFamilies) {
    for (int i = 0; i < 10000; ++i) {
      const auto v = sample_participant_valuation(f, 0.6, rng);
      REQUIRE(v.total_value >= 0.6);
      REQUIRE(v.total_value <= 1.0);
    }
  }
}

TEST_CASE("premium distribution closed-form values") {
  const PremiumValueDistribution u(ValueFamily::Uniform01, 0.5);
  const PremiumValueDistribution b(ValueFamily::Beta22, 0.5);

  CHECK(premium_pdf(u, 0.1) == doctest::Approx(2.77258872223978124).epsilon(1e-14));
  CHECK(premium_pdf(b, 0.1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(premium_pdf(b, 0.4) == doctest::Approx(0.48).epsilon(1e-13));

  CHECK(premium_cdf(u, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(premium_cdf(u, 0.1) == doctest::Approx(0.277258872223978124).epsilon(1e-14));
  CHECK(premium_cdf(b, 0.5) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(premium_cdf_integral(u, 0.0) == 0.0);
  CHECK(premium_cdf_integral(b, 0.0) == 0.0);
  CHECK(premium_cdf_integral(u, 0.2) == doctest::Approx(0.0554517744447956248).epsilon(1e-14));
  CHECK(premium_cdf_integral(b, 0.2) == doctest::Approx(0.06).epsilon(1e-14));

  CHECK_THROWS_AS(premium_cdf(u, -0.01), DomainError);
  CHECK_THROWS_AS(premium_pdf(u, 0.51), DomainError);
}

TEST_CASE("closed forms agree with direct integration over lambda") {
  for (auto f : kFamilies) {
    for (double p : kPrices) {
      const PremiumValueDistribution d(f, p);
      const auto t = truncated(f, p);
      for (int i = 1; i < 25; ++i) {
        const double y = i / 50.0 + 0.003;
        CAPTURE(p);
        CAPTURE(y);
        CHECK(std::abs(d.pdf(y) - oracle::product_pdf(t, y)) < 1e-7);
        CHECK(std::abs(d.cdf(y) - oracle::product_cdf(t, y)) < 1e-8);
      }
      for (double y : {0.07, 0.23, 0.41}) {
        CHECK(std::abs(d.cdf_integral(y) - oracle::product_cdf_integral(t, y)) < 1e-8);
      }
    }
  }
}

TEST_CASE("total probability and continuity at the breakpoint") {
  for (auto f : kFamilies) {
    for (double p : kPrices) {
      const PremiumValueDistribution d(f, p);
      CAPTURE(p);
      CHECK(std::abs(d.cdf(0.0)) < 1e-10);
      CHECK(std::abs(d.cdf(0.5) - 1.0) < 1e-10);
      const double y = d.breakpoint();
      CHECK(std::abs(d.pdf_branch(0, y) - d.pdf_branch(1, y)) < 1e-10);
      CHECK(std::abs(d.cdf_branch(0, y) - d.cdf_branch(1, y)) < 1e-10);
      CHECK(std::abs(d.cdf_integral_branch(0, y) - d.cdf_integral_branch(1, y)) < 1e-10);
    }
  }
}

TEST_CASE("derivatives match by finite differences") {
  const double h = 1e-6;
  for (auto f : kFamilies) {
    for (double p : kPrices) {
      const PremiumValueDistribution d(f, p);
      double worst_pdf = 0.0;
      double worst_cdf = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double y = 0.001 + (0.498 - 0.001) * i / 999.0;
        if (std::abs(y - d.breakpoint()) <= 1e-4) continue;
        const double dF = (d.cdf(y + h) - d.cdf(y - h)) / (2 * h);
        const double dI = (d.cdf_integral(y + h) - d.cdf_integral(y - h)) / (2 * h);
        worst_pdf = std::max(worst_pdf, std::abs(dF - d.pdf(y)));
        worst_cdf = std::max(worst_cdf, std::abs(dI - d.cdf(y)));
      }
      CAPTURE(p);
      CHECK(worst_pdf < 1e-6);
      CHECK(worst_cdf < 1e-6);
    }
  }
}

TEST_CASE("cdf is nondecreasing and bounded") {
  for (auto f : kFamilies) {
    for (double p : kPrices) {
      const PremiumValueDistribution d(f, p);
      double prev = 0.0;
      for (int i = 0; i <= 2000; ++i) {
        const double F = d.cdf(i / 4000.0);
        REQUIRE(F >= prev);
        REQUIRE(F <= 1.0);
        prev = F;
      }
    }
  }
}

TEST_CASE("histogram of a point mass") {
  const std::vector<double> samples(1000, 0.25);
  const auto h = empirical_pdf_cdf(samples, 10);
  REQUIRE(h.size() == 10);
  double total = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    total += h[i].density * 0.05;
    if (i < 5) {
      CHECK(h[i].density == 0.0);
      CHECK(h[i].cumulative == 0.0);
    } else {
      CHECK(h[i].cumulative == 1.0);
    }
  }
  CHECK(h[5].density == doctest::Approx(20.0));
  CHECK(std::abs(total - 1.0) < 1e-9);

  CHECK_THROWS(empirical_pdf_cdf(samples, 9));
  CHECK_THROWS(empirical_pdf_cdf(std::vector<double>{}, 10));
}

TEST_CASE("histogram of truncated products tracks the cdf") {
  for (auto [f, p] : {std::pair{ValueFamily::Uniform01, 0.5}, std::pair{ValueFamily::Beta22, 0.25}}) {
    Stream rng = Stream::keyed(77, {static_cast<std::uint64_t>(f == ValueFamily::Beta22)});
    std::vector<double> s(1000000);
    for (auto& x : s) x = sample_participant_valuation(f, p, rng).premium_value;
    const auto h = empirical_pdf_cdf(s, 200);
    const PremiumValueDistribution d(f, p);
    double sup = 0.0;
    double mass = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      sup = std::max(sup, std::abs(h[i].cumulative - d.cdf((i + 1) * 0.5 / 200)));
      mass += h[i].density * 0.5 / 200;
    }
    CHECK(sup < 0.01);
    CHECK(std::abs(mass - 1.0) < 1e-9);
    CHECK(h.back().cumulative == 1.0);
  }
}
