#include "sira/value_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sira/error.hpp"

namespace sira {
namespace {

constexpr double kRoundOff = 1e-14;

// Pulls a probability back into [0, 1] if it strayed by round-off only.
double clamp_probability(double value, const char* what) {
  if (value < 0.0) {
    if (value < -kRoundOff) throw NumericError(std::string(what) + " below 0 beyond round-off");
    return 0.0;
  }
  if (value > 1.0) {
    if (value > 1.0 + kRoundOff) throw NumericError(std::string(what) + " above 1 beyond round-off");
    return 1.0;
  }
  return value;
}

double clamp_nonnegative(double value, const char* what) {
  if (value < 0.0) {
    if (value < -kRoundOff) throw NumericError(std::string(what) + " negative beyond round-off");
    return 0.0;
  }
  return value;
}

void check_premium_argument(double y, const char* op) {
  if (!(y >= 0.0 && y <= 0.5)) {
    throw DomainError(std::string(op) + ": y must lie in [0, 1/2], got " + std::to_string(y));
  }
}

}  // namespace

SafetyCostModel::SafetyCostModel(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("SafetyCostModel: gamma must be positive and finite");
  }
}

double SafetyCostModel::cost(double safety) const {
  return gamma_ == 1.0 ? safety : std::pow(safety, gamma_);
}

double SafetyCostModel::safety(double cost) const {
  return gamma_ == 1.0 ? cost : std::pow(cost, 1.0 / gamma_);
}

double price_of_safety(const SafetyCostModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("price_of_safety: epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  }
  return model.cost(epsilon);
}

double safety_from_bid(const SafetyCostModel& model, double bid) {
  if (!(bid > 0.0 && bid <= 1.0)) {
    throw DomainError("safety_from_bid: bid must lie in (0, 1], got " + std::to_string(bid));
  }
  return model.safety(bid);
}

std::string_view to_string(ValueFamily family) {
  switch (family) {
    case ValueFamily::Uniform01:
      return "uniform";
    case ValueFamily::Beta22:
      return "beta";
  }
  return "unknown";
}

ValueFamily parse_value_family(std::string_view name) {
  if (name == "uniform" || name == "Uniform01") return ValueFamily::Uniform01;
  if (name == "beta" || name == "Beta22") return ValueFamily::Beta22;
  throw DomainError("unknown value family '" + std::string(name) + "' (expected uniform or beta)");
}

double beta22_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * (3.0 - 2.0 * x);
}

double beta22_pdf(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 6.0 * x * (1.0 - x);
}

double beta22_quantile(double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw DomainError("beta22_quantile: u must lie in [0, 1]");
  }
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;

  double lo = 0.0;
  double hi = 1.0;
  double x = u;
  for (int iter = 0; iter < 200; ++iter) {
    const double residual = beta22_cdf(x) - u;
    if (std::abs(residual) < 1e-12) return x;
    if (residual > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double slope = beta22_pdf(x);
    double next = slope > 0.0 ? x - residual / slope : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) return x;
    x = next;
  }
  throw NumericError("beta22_quantile: no convergence");
}

AgentValuation AgentValuation::from_parts(double total_value, double scaling_factor) {
  if (!(total_value >= 0.0 && total_value <= 1.0)) {
    throw DomainError("AgentValuation: total value must lie in [0, 1]");
  }
  if (!(scaling_factor >= 0.0 && scaling_factor <= 0.5)) {
    throw DomainError("AgentValuation: scaling factor must lie in [0, 1/2]");
  }
  AgentValuation v;
  v.total_value = total_value;
  v.scaling_factor = scaling_factor;
  v.premium_value = scaling_factor * total_value;
  v.deployment_value = total_value - v.premium_value;
  return v;
}

double total_value_from_uniform(ValueFamily family, double u, double lower) {
  if (!(lower >= 0.0 && lower < 1.0)) {
    throw DomainError("total value lower bound must lie in [0, 1)");
  }
  switch (family) {
    case ValueFamily::Uniform01:
      return lower + (1.0 - lower) * u;
    case ValueFamily::Beta22: {
      const double base = beta22_cdf(lower);
      return std::max(lower, beta22_quantile(base + (1.0 - base) * u));
    }
  }
  throw DomainError("unknown value family");
}

AgentValuation valuation_from_uniforms(ValueFamily family, double u_value, double u_lambda,
                                       double lower) {
  return AgentValuation::from_parts(total_value_from_uniform(family, u_value, lower),
                                    0.5 * u_lambda);
}

AgentValuation sample_agent_valuation(ValueFamily family, Stream& rng) {
  const double u_value = rng.uniform01();
  const double u_lambda = rng.uniform01();
  return valuation_from_uniforms(family, u_value, u_lambda);
}

AgentValuation sample_participant_valuation(ValueFamily family, double p_eps, Stream& rng) {
  const double u_value = rng.uniform01();
  const double u_lambda = rng.uniform01();
  return valuation_from_uniforms(family, u_value, u_lambda, p_eps);
}

PremiumValueDistribution::PremiumValueDistribution(ValueFamily family, double p_eps)
    : family_(family), p_eps_(p_eps), log_p_(0.0), tail_mass_(0.0) {
  if (!(p_eps > 0.0 && p_eps < 1.0)) {
    throw DomainError("PremiumValueDistribution: p_eps must lie in (0, 1), got " +
                      std::to_string(p_eps));
  }
  log_p_ = std::log(p_eps);
  // 1 - (3p^2 - 2p^3), factored to avoid cancellation for p near 1.
  tail_mass_ = (1.0 - p_eps) * (1.0 - p_eps) * (1.0 + 2.0 * p_eps);
  if (!(tail_mass_ > 0.0)) {
    throw NumericError("PremiumValueDistribution: 1 - F_beta(p_eps) is not positive");
  }
}

double PremiumValueDistribution::pdf_branch(int branch, double y) const {
  const double p = p_eps_;
  if (family_ == ValueFamily::Uniform01) {
    if (branch == 0) return 2.0 * log_p_ / (p - 1.0);
    return 2.0 * std::log(2.0 * y) / (p - 1.0);
  }
  if (branch == 0) return 6.0 * (p * p - 2.0 * p + 1.0) / tail_mass_;
  return 6.0 * (4.0 * y * y - 4.0 * y + 1.0) / tail_mass_;
}

double PremiumValueDistribution::cdf_branch(int branch, double y) const {
  const double p = p_eps_;
  if (family_ == ValueFamily::Uniform01) {
    if (branch == 0) return 2.0 * y * log_p_ / (p - 1.0);
    return (2.0 * y * (std::log(2.0 * y) - 1.0) + p) / (p - 1.0);
  }
  if (branch == 0) return 6.0 * y * (p * p - 2.0 * p + 1.0) / tail_mass_;
  return (2.0 * y * (4.0 * y * y - 6.0 * y + 3.0) + p * p * (2.0 * p - 3.0)) / tail_mass_;
}

double PremiumValueDistribution::cdf_integral_branch(int branch, double y) const {
  const double p = p_eps_;
  if (family_ == ValueFamily::Uniform01) {
    if (branch == 0) return y * y * log_p_ / (p - 1.0);
    return (4.0 * y * y * (2.0 * std::log(2.0 * y) - 3.0) + 8.0 * y * p - p * p) /
           (8.0 * (p - 1.0));
  }
  if (branch == 0) return 3.0 * y * y * (p * p - 2.0 * p + 1.0) / tail_mass_;
  return (8.0 * y * (2.0 * y * y * y - 4.0 * y * y + 3.0 * y + p * p * (2.0 * p - 3.0)) +
          p * p * p * (4.0 - 3.0 * p)) /
         (8.0 * tail_mass_);
}

double PremiumValueDistribution::pdf(double y) const {
  check_premium_argument(y, "premium_pdf");
  return clamp_nonnegative(pdf_branch(branch_of(y), y), "premium_pdf");
}

double PremiumValueDistribution::cdf(double y) const {
  check_premium_argument(y, "premium_cdf");
  return clamp_probability(cdf_branch(branch_of(y), y), "premium_cdf");
}

double PremiumValueDistribution::cdf_integral(double y) const {
  check_premium_argument(y, "premium_cdf_integral");
  return clamp_nonnegative(cdf_integral_branch(branch_of(y), y), "premium_cdf_integral");
}

double premium_pdf(const PremiumValueDistribution& dist, double y) { return dist.pdf(y); }
double premium_cdf(const PremiumValueDistribution& dist, double y) { return dist.cdf(y); }
double premium_cdf_integral(const PremiumValueDistribution& dist, double y) {
  return dist.cdf_integral(y);
}

std::vector<HistogramBin> empirical_pdf_cdf(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) throw DomainError("empirical_pdf_cdf: sample set is empty");
  if (bins < 10) throw DomainError("empirical_pdf_cdf: need at least 10 bins");

  const double width = 0.5 / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double y : samples) {
    if (!(y >= 0.0 && y <= 0.5)) {
      throw DomainError("empirical_pdf_cdf: sample outside [0, 1/2]");
    }
    auto idx = static_cast<std::size_t>(y / width);
    counts[std::min(idx, bins - 1)] += 1;
  }

  const auto n = static_cast<double>(samples.size());
  std::vector<HistogramBin> out(bins);
  std::size_t running = 0;
  for (std::size_t i = 0; i < bins; ++i) {
    running += counts[i];
    out[i].center = (static_cast<double>(i) + 0.5) * width;
    out[i].density = static_cast<double>(counts[i]) / (n * width);
    out[i].cumulative = static_cast<double>(running) / n;
  }
  return out;
}

}  // namespace sira
