#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sira/value_model.hpp"

namespace sira {

// Admissible range for the price of safety in bidding formulas; they divide by
// p_eps - 1 and take ln(p_eps).
inline constexpr double kMinPrice = 1e-6;
inline constexpr double kMaxPrice = 1.0 - 1e-6;

void check_price(double p_eps);

struct BidDecision {
  double raw_bid = 0.0;           // uncapped optimal bid
  double bid = 0.0;               // min(raw_bid, 1)
  double predicted_utility = 0.0;
  bool participates = false;      // predicted_utility > 0
  double safety = 0.0;            // M^-1(bid) if participating, else 0
};

// A premium-value CDF on [0, 1/2], optionally with a closed-form integral.
// Breakpoints mark kinks that quadrature should not straddle.
struct CdfEvaluator {
  std::function<double(double)> cdf;
  std::optional<std::function<double(double)>> cdf_integral;
  std::vector<double> breakpoints;

  // Closed-form CDF of dist. With_integral selects whether the closed ∫F is
  // attached or left to quadrature.
  static CdfEvaluator from(const PremiumValueDistribution& dist, bool with_integral);
};

BidDecision reserve_threshold_bid(double v_d, double p_eps, const SafetyCostModel& model);

// p_eps + v_p F(v_p) - ∫_0^{v_p} F(z) dz. The integral comes from
// F.cdf_integral when present and from adaptive Simpson (tol 1e-10) otherwise.
double sira_bid_generic(const CdfEvaluator& F, double v_p, double p_eps);

double sira_bid_uniform(double v_p, double p_eps);
double sira_bid_beta(double v_p, double p_eps);

// Per-branch forms of the closed-form bids, branch 0 for v_p <= p_eps / 2.
double sira_bid_uniform_branch(int branch, double v_p, double p_eps);
double sira_bid_beta_branch(int branch, double v_p, double p_eps);

double sira_bid(ValueFamily family, double v_p, double p_eps);

double cap_bid(double raw);

// v_d + v_p F(v_p) - bid; a bid of 1 wins with certainty, giving v_d + v_p - 1.
double equilibrium_utility(double v_d, double v_p, double bid,
                           const std::function<double(double)>& F);

// Full SIRA decision for one agent: bid, cap, predicted utility, participation
// and implied safety.
BidDecision decide(const AgentValuation& valuation, double p_eps, ValueFamily family,
                   const SafetyCostModel& model);

// Variant that reuses a prebuilt distribution when deciding for many agents.
BidDecision decide(const AgentValuation& valuation, const PremiumValueDistribution& dist,
                   const SafetyCostModel& model);

}  // namespace sira
