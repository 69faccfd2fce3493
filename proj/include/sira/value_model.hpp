#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sira/random.hpp"

namespace sira {

// Strictly increasing map from model safety s in (0,1) to training cost,
// M(s) = s^gamma, with exact inverse M^-1(b) = b^(1/gamma).
class SafetyCostModel {
 public:
  explicit SafetyCostModel(double gamma = 1.0);

  double gamma() const { return gamma_; }
  double cost(double safety) const;
  double safety(double cost) const;

 private:
  double gamma_;
};

// p_eps = M(epsilon). Throws DomainError unless 0 < epsilon < 1.
double price_of_safety(const SafetyCostModel& model, double epsilon);

// s = M^-1(bid). Throws DomainError unless 0 < bid <= 1.
double safety_from_bid(const SafetyCostModel& model, double bid);

enum class ValueFamily { Uniform01, Beta22 };

std::string_view to_string(ValueFamily family);
ValueFamily parse_value_family(std::string_view name);

/// Beta(2,2) on [0,1]: F(x) = 3x^2 - 2x^3, f(x) = 6x(1-x).
double beta22_cdf(double x);
double beta22_pdf(double x);

/// Inverse of beta22_cdf by Newton iteration safeguarded with bisection.
/// Converges to |F(x) - u| < 1e-12.
double beta22_quantile(double u);

// One agent's private draw. The deployment value is stored as V - v_p so that
// v_d + v_p reproduces V exactly.
struct AgentValuation {
  double total_value = 0.0;
  double scaling_factor = 0.0;
  double deployment_value = 0.0;
  double premium_value = 0.0;

  static AgentValuation from_parts(double total_value, double scaling_factor);
};

// Maps two uniforms to a valuation: V by inverse transform of the family CDF
// restricted to [lower, 1], lambda = u_lambda / 2.
AgentValuation valuation_from_uniforms(ValueFamily family, double u_value, double u_lambda,
                                       double lower = 0.0);

double total_value_from_uniform(ValueFamily family, double u, double lower = 0.0);

// Population draw: V from the untruncated family, lambda ~ U[0, 1/2].
// Consumes exactly two uniforms from the stream (V first).
AgentValuation sample_agent_valuation(ValueFamily family, Stream& rng);

// Participant draw: V from the family truncated to [p_eps, 1]. This is the
// population the closed-form premium distribution describes.
AgentValuation sample_participant_valuation(ValueFamily family, double p_eps, Stream& rng);

// Distribution of v_p = V * lambda with V ~ family conditioned on [p_eps, 1]
// and lambda ~ U[0, 1/2]. Each evaluator is a two-branch closed form with the
// branch point at y = p_eps / 2. Immutable and thread-safe.
class PremiumValueDistribution {
 public:
  PremiumValueDistribution(ValueFamily family, double p_eps);

  ValueFamily family() const { return family_; }
  double p_eps() const { return p_eps_; }
  double breakpoint() const { return 0.5 * p_eps_; }

  double pdf(double y) const;
  double cdf(double y) const;
  double cdf_integral(double y) const;

  // Branch evaluators without domain checks or clamping; exposed so that
  // continuity at the breakpoint can be checked from both sides.
  double pdf_branch(int branch, double y) const;
  double cdf_branch(int branch, double y) const;
  double cdf_integral_branch(int branch, double y) const;

 private:
  int branch_of(double y) const { return y <= breakpoint() ? 0 : 1; }

  ValueFamily family_;
  double p_eps_;
  double log_p_;     // Uniform01: ln(p_eps)
  double tail_mass_; // Beta22: 1 - F_beta(p_eps)
};

double premium_pdf(const PremiumValueDistribution& dist, double y);
double premium_cdf(const PremiumValueDistribution& dist, double y);
double premium_cdf_integral(const PremiumValueDistribution& dist, double y);

struct HistogramBin {
  double center = 0.0;
  double density = 0.0;
  double cumulative = 0.0;
};

// Equal-width histogram of samples on [0, 1/2]; density = count / (N * width),
// cumulative is the empirical CDF at each bin's right edge.
std::vector<HistogramBin> empirical_pdf_cdf(std::span<const double> samples, std::size_t bins);

}  // namespace sira
