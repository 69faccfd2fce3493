#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sira/mechanism.hpp"
#include "sira/value_model.hpp"

namespace sira {

struct ProbeValuation {
  double deployment_value = 0.5;
  double premium_value = 0.25;
};

struct DeviationPoint {
  double delta = 0.0;
  double bid = 0.0;
  double mean_utility = 0.0;
  double std_err = 0.0;
  // Mean of (u(delta) - u(0)) over the shared opponents and its standard error.
  double diff_vs_optimum = 0.0;
  double diff_std_err = 0.0;
  std::size_t n_samples = 0;
};

struct DeviationSweepResult {
  ValueFamily family = ValueFamily::Uniform01;
  double p_eps = 0.0;
  ProbeValuation probe;
  double optimal_bid = 0.0;        // capped equilibrium bid b*
  double predicted_utility = 0.0;  // equilibrium_utility at b*
  std::uint64_t seed = 0;
  std::vector<DeviationPoint> points;  // sorted by delta, always contains 0

  const DeviationPoint& at(double delta) const;
};

// Points are looked up by delta within 1e-12.
// One probe agent bids clamp((1 + delta) b*, 0, 1) against n_opponents
// equilibrium opponents (all bidding at least p_eps). The same opponents are
// reused for every delta. Bids below p_eps are rejected outright.
DeviationSweepResult deviation_sweep(ValueFamily family, double p_eps, ProbeValuation probe,
                                     std::size_t n_opponents, std::vector<double> deltas,
                                     std::uint64_t seed, unsigned workers = 1);

struct MechanismStats {
  double participation_rate = 0.0;
  double mean_bid = 0.0;
  double se_participation = 0.0;
  double se_bid = 0.0;
};

struct ThresholdPoint {
  double p_eps = 0.0;
  MechanismStats reserve;
  MechanismStats sira;
  // SIRA minus Reserve participation, paired over common valuations.
  double participation_uplift = 0.0;
  double se_participation_uplift = 0.0;
  double bid_uplift = 0.0;  // SIRA mean bid minus p_eps (the reserve bid)
  double se_bid_uplift = 0.0;
};

struct ThresholdSweepResult {
  ValueFamily family = ValueFamily::Uniform01;
  std::size_t n_agents = 0;
  std::uint64_t seed = 0;
  std::vector<ThresholdPoint> points;
};

// Point k uses seed mix(seed, k) for both mechanisms, so Reserve and SIRA see
// the same valuations at every p_eps.
ThresholdSweepResult threshold_sweep(ValueFamily family, const std::vector<double>& p_eps_grid,
                                     std::size_t n_agents, std::uint64_t seed, double gamma = 1.0,
                                     unsigned workers = 1);

std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t index);

struct DistributionValidation {
  ValueFamily family = ValueFamily::Uniform01;
  double p_eps = 0.0;
  std::size_t n_samples = 0;
  std::size_t bins = 0;
  double pdf_sup_error = 0.0;  // interior bins, excluding the two around p_eps / 2
  double cdf_sup_error = 0.0;  // at bin right edges
  double ks_distance = 0.0;    // sup over all sample points
  std::vector<HistogramBin> histogram;
  std::vector<double> model_density;     // closed-form pdf at bin centers
  std::vector<double> model_cumulative;  // closed-form cdf at bin right edges
};

// Draws v_p = V * lambda with V from the family truncated to [p_eps, 1] and
// compares the empirical histogram and CDF to the closed forms.
DistributionValidation validate_product_distribution(ValueFamily family, double p_eps,
                                                     std::size_t n_samples, std::size_t bins,
                                                     std::uint64_t seed, unsigned workers = 1);

std::vector<double> sample_premium_products(ValueFamily family, double p_eps,
                                            std::size_t n_samples, std::uint64_t seed,
                                            unsigned workers = 1);

// Largest |p - F(x)| between the empirical CDF of samples and F.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

struct CrosscheckRow {
  ValueFamily family = ValueFamily::Uniform01;
  double p_eps = 0.0;
  double v_p = 0.0;
  double closed_form_bid = 0.0;
  double quadrature_bid = 0.0;
  double abs_diff = 0.0;
};

struct CrosscheckResult {
  std::vector<CrosscheckRow> rows;
  double max_abs_diff = 0.0;
};

// Closed-form bid against the generic bid with ∫F left to quadrature.
CrosscheckResult closed_form_vs_quadrature(ValueFamily family, const std::vector<double>& vp_grid,
                                           const std::vector<double>& p_eps_grid);

// n evenly spaced points covering [lo, hi] inclusive, rounded to 12 decimals
// so decimal grids print without representation noise.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace sira
