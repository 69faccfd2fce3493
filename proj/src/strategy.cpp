#include "sira/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sira/error.hpp"
#include "sira/quadrature.hpp"

namespace sira {
namespace {

void check_premium_value(double v_p, const char* op) {
  if (!(v_p >= 0.0 && v_p <= 0.5)) {
    throw DomainError(std::string(op) + ": v_p must lie in [0, 1/2], got " + std::to_string(v_p));
  }
}

}  // namespace

void check_price(double p_eps) {
  if (!(p_eps >= kMinPrice && p_eps <= kMaxPrice)) {
    throw DomainError("p_eps must lie in [1e-6, 1 - 1e-6], got " + std::to_string(p_eps));
  }
}

CdfEvaluator CdfEvaluator::from(const PremiumValueDistribution& dist, bool with_integral) {
  CdfEvaluator F;
  F.cdf = [dist](double y) { return dist.cdf(y); };
  if (with_integral) {
    F.cdf_integral = [dist](double y) { return dist.cdf_integral(y); };
  }
  F.breakpoints = {dist.breakpoint()};
  return F;
}

BidDecision reserve_threshold_bid(double v_d, double p_eps, const SafetyCostModel& model) {
  if (!(v_d >= 0.0 && v_d <= 1.0)) {
    throw DomainError("reserve_threshold_bid: v_d must lie in [0, 1]");
  }
  if (!(p_eps > 0.0 && p_eps < 1.0)) {
    throw DomainError("reserve_threshold_bid: p_eps must lie in (0, 1)");
  }
  BidDecision d;
  d.raw_bid = p_eps;
  d.bid = p_eps;
  d.predicted_utility = v_d - p_eps;
  d.participates = d.predicted_utility > 0.0;
  d.safety = d.participates ? model.safety(p_eps) : 0.0;
  return d;
}

double sira_bid_generic(const CdfEvaluator& F, double v_p, double p_eps) {
  check_premium_value(v_p, "sira_bid_generic");
  if (!F.cdf) throw DomainError("sira_bid_generic: missing CDF");
  if (v_p == 0.0) return p_eps;
  const double area = F.cdf_integral
                          ? (*F.cdf_integral)(v_p)
                          : integrate_piecewise(F.cdf, 0.0, v_p, F.breakpoints,
                                                QuadratureOptions{1e-10, 50});
  return p_eps + v_p * F.cdf(v_p) - area;
}

double sira_bid_uniform_branch(int branch, double v_p, double p_eps) {
  if (branch == 0) {
    return p_eps + v_p * v_p * std::log(p_eps) / (p_eps - 1.0);
  }
  return p_eps + (8.0 * v_p * v_p * (std::log(2.0 * v_p) - 0.5) + p_eps * p_eps) /
                     (8.0 * (p_eps - 1.0));
}

double sira_bid_beta_branch(int branch, double v_p, double p_eps) {
  const double tail = (1.0 - p_eps) * (1.0 - p_eps) * (1.0 + 2.0 * p_eps);
  if (!(tail > 0.0)) throw NumericError("sira_bid_beta: 1 - F_beta(p_eps) is not positive");
  if (branch == 0) {
    return p_eps + 3.0 * v_p * v_p * (p_eps * p_eps - 2.0 * p_eps + 1.0) / tail;
  }
  return p_eps + (8.0 * v_p * v_p * (6.0 * v_p * v_p - 8.0 * v_p + 3.0) +
                  p_eps * p_eps * p_eps * (3.0 * p_eps - 4.0)) /
                     (8.0 * tail);
}

double sira_bid_uniform(double v_p, double p_eps) {
  check_premium_value(v_p, "sira_bid_uniform");
  check_price(p_eps);
  return sira_bid_uniform_branch(v_p <= 0.5 * p_eps ? 0 : 1, v_p, p_eps);
}

double sira_bid_beta(double v_p, double p_eps) {
  check_premium_value(v_p, "sira_bid_beta");
  check_price(p_eps);
  return sira_bid_beta_branch(v_p <= 0.5 * p_eps ? 0 : 1, v_p, p_eps);
}

double sira_bid(ValueFamily family, double v_p, double p_eps) {
  return family == ValueFamily::Uniform01 ? sira_bid_uniform(v_p, p_eps)
                                          : sira_bid_beta(v_p, p_eps);
}

double cap_bid(double raw) { return std::min(raw, 1.0); }

double equilibrium_utility(double v_d, double v_p, double bid,
                           const std::function<double(double)>& F) {
  if (bid >= 1.0) return v_d + v_p - 1.0;
  return v_d + v_p * F(v_p) - bid;
}

BidDecision decide(const AgentValuation& valuation, const PremiumValueDistribution& dist,
                   const SafetyCostModel& model) {
  check_price(dist.p_eps());
  BidDecision d;
  d.raw_bid = sira_bid(dist.family(), valuation.premium_value, dist.p_eps());
  d.bid = cap_bid(d.raw_bid);
  d.predicted_utility = equilibrium_utility(valuation.deployment_value, valuation.premium_value,
                                            d.bid, [&dist](double y) { return dist.cdf(y); });
  d.participates = d.predicted_utility > 0.0;
  d.safety = d.participates ? safety_from_bid(model, d.bid) : 0.0;
  return d;
}

BidDecision decide(const AgentValuation& valuation, double p_eps, ValueFamily family,
                   const SafetyCostModel& model) {
  check_price(p_eps);
  return decide(valuation, PremiumValueDistribution(family, p_eps), model);
}

}  // namespace sira
