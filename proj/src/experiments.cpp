#include "sira/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sira/error.hpp"
#include "sira/parallel.hpp"
#include "sira/strategy.hpp"

namespace sira {
namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  const auto n = static_cast<double>(xs.size());
  // Accumulate offsets from the first value so a constant sample has an exact mean.
  const double shift = xs.front();
  double sum = 0.0;
  for (double x : xs) sum += x - shift;
  out.mean = shift + sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace

const DeviationPoint& DeviationSweepResult::at(double delta) const {
  for (const auto& p : points) {
    if (std::abs(p.delta - delta) <= 1e-12) return p;
  }
  throw DomainError("DeviationSweepResult: no point at delta " + std::to_string(delta));
}

DeviationSweepResult deviation_sweep(ValueFamily family, double p_eps, ProbeValuation probe,
                                     std::size_t n_opponents, std::vector<double> deltas,
                                     std::uint64_t seed, unsigned workers) {
  if (!(p_eps >= kMinPrice && p_eps <= kMaxPrice)) {
    throw ConfigError("p_eps: out of range [1e-6, 1 - 1e-6]");
  }
  if (n_opponents < 1000) throw ConfigError("n_opponents: need at least 1000");
  if (!(probe.premium_value >= 0.0 && probe.premium_value <= 0.5)) {
    throw ConfigError("probe premium value must lie in [0, 1/2]");
  }
  if (!(probe.deployment_value >= 0.0 && probe.deployment_value <= 1.0)) {
    throw ConfigError("probe deployment value must lie in [0, 1]");
  }
  for (double d : deltas) {
    if (!(d >= -1.0 && d <= 1.0)) throw ConfigError("deltas: each must lie in [-1, 1]");
  }
  if (std::find(deltas.begin(), deltas.end(), 0.0) == deltas.end()) deltas.push_back(0.0);
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  const PremiumValueDistribution dist(family, p_eps);
  DeviationSweepResult result;
  result.family = family;
  result.p_eps = p_eps;
  result.probe = probe;
  result.seed = seed;
  result.optimal_bid = cap_bid(sira_bid(family, probe.premium_value, p_eps));
  result.predicted_utility =
      equilibrium_utility(probe.deployment_value, probe.premium_value, result.optimal_bid,
                          [&dist](double y) { return dist.cdf(y); });

  std::vector<double> rival_bid(n_opponents);
  std::vector<char> tie_coin(n_opponents);
  parallel_for(n_opponents, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Stream rng = Stream::keyed(seed, {stream_purpose::deviation, k});
      rival_bid[k] = draw_equilibrium_opponent_bid(family, p_eps, rng);
      tie_coin[k] = rng.coin();
    }
  });

  auto utilities_at = [&](double bid) {
    std::vector<double> u(n_opponents);
    const bool accepted = bid >= p_eps;
    for (std::size_t k = 0; k < n_opponents; ++k) {
      const bool won = accepted && (bid > rival_bid[k] || (bid == rival_bid[k] && tie_coin[k]));
      u[k] = realize_utility(bid, accepted, won, probe.deployment_value, probe.premium_value);
    }
    return u;
  };

  const std::vector<double> at_optimum = utilities_at(result.optimal_bid);
  for (double delta : deltas) {
    DeviationPoint point;
    point.delta = delta;
    point.bid = std::clamp((1.0 + delta) * result.optimal_bid, 0.0, 1.0);
    point.n_samples = n_opponents;
    const std::vector<double> u = utilities_at(point.bid);
    const MeanSe level = mean_and_se(u);
    point.mean_utility = level.mean;
    point.std_err = level.se;
    std::vector<double> diff(n_opponents);
    for (std::size_t k = 0; k < n_opponents; ++k) diff[k] = u[k] - at_optimum[k];
    const MeanSe gap = mean_and_se(diff);
    point.diff_vs_optimum = gap.mean;
    point.diff_std_err = gap.se;
    result.points.push_back(point);
  }
  return result;
}

std::uint64_t sweep_point_seed(std::uint64_t seed, std::size_t index) {
  return Stream::keyed(seed, {stream_purpose::sweep_point, index}).next_u64();
}

ThresholdSweepResult threshold_sweep(ValueFamily family, const std::vector<double>& p_eps_grid,
                                     std::size_t n_agents, std::uint64_t seed, double gamma,
                                     unsigned workers) {
  if (p_eps_grid.empty()) throw ConfigError("p_eps grid: empty");
  if (n_agents < 10000) throw ConfigError("n_agents: need at least 10000 for a sweep");

  ThresholdSweepResult result;
  result.family = family;
  result.n_agents = n_agents;
  result.seed = seed;
  for (std::size_t k = 0; k < p_eps_grid.size(); ++k) {
    AuctionConfig config;
    config.n_agents = n_agents;
    config.p_eps = p_eps_grid[k];
    config.family = family;
    config.gamma = gamma;
    config.seed = sweep_point_seed(seed, k);
    config.workers = workers;
    config.validate();

    const auto valuations = sample_population(config);
    const AuctionReport reserve = run_reserve_threshold(config, valuations);
    const AuctionReport sira = run_sira(config, valuations);

    ThresholdPoint point;
    point.p_eps = config.p_eps;
    point.reserve = {reserve.summary.participation_rate, reserve.summary.mean_bid,
                     reserve.summary.se_participation, reserve.summary.se_bid};
    point.sira = {sira.summary.participation_rate, sira.summary.mean_bid,
                  sira.summary.se_participation, sira.summary.se_bid};

    std::vector<double> paired(n_agents);
    for (std::size_t i = 0; i < n_agents; ++i) {
      paired[i] = static_cast<double>(sira.outcomes[i].submitted) -
                  static_cast<double>(reserve.outcomes[i].submitted);
    }
    const MeanSe uplift = mean_and_se(paired);
    point.participation_uplift = uplift.mean;
    point.se_participation_uplift = uplift.se;
    point.bid_uplift = sira.summary.participants > 0 ? sira.summary.mean_bid - config.p_eps : 0.0;
    point.se_bid_uplift = sira.summary.se_bid;
    result.points.push_back(point);
  }
  return result;
}

std::vector<double> sample_premium_products(ValueFamily family, double p_eps,
                                            std::size_t n_samples, std::uint64_t seed,
                                            unsigned workers) {
  std::vector<double> out(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      Stream rng = Stream::keyed(seed, {stream_purpose::product_samples, k});
      out[k] = sample_participant_valuation(family, p_eps, rng).premium_value;
    }
  });
  return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_distance: sample set is empty");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    sup = std::max({sup, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return sup;
}

DistributionValidation validate_product_distribution(ValueFamily family, double p_eps,
                                                     std::size_t n_samples, std::size_t bins,
                                                     std::uint64_t seed, unsigned workers) {
  if (n_samples < 100000) throw ConfigError("n_samples: need at least 100000");
  const PremiumValueDistribution dist(family, p_eps);
  const std::vector<double> samples = sample_premium_products(family, p_eps, n_samples, seed, workers);

  DistributionValidation v;
  v.family = family;
  v.p_eps = p_eps;
  v.n_samples = n_samples;
  v.bins = bins;
  v.histogram = empirical_pdf_cdf(samples, bins);

  const double width = 0.5 / static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const HistogramBin& bin = v.histogram[i];
    const double right = std::min(0.5, static_cast<double>(i + 1) * width);
    v.model_density.push_back(dist.pdf(bin.center));
    v.model_cumulative.push_back(dist.cdf(right));
    v.cdf_sup_error = std::max(v.cdf_sup_error, std::abs(bin.cumulative - v.model_cumulative[i]));
    // Histogram bins straddling the kink are biased; skip the two nearest it.
    if (std::abs(bin.center - dist.breakpoint()) < width) continue;
    v.pdf_sup_error = std::max(v.pdf_sup_error, std::abs(bin.density - v.model_density[i]));
  }
  v.ks_distance = ks_distance(samples, [&dist](double y) { return dist.cdf(y); });
  return v;
}

CrosscheckResult closed_form_vs_quadrature(ValueFamily family, const std::vector<double>& vp_grid,
                                           const std::vector<double>& p_eps_grid) {
  CrosscheckResult result;
  for (double p : p_eps_grid) {
    check_price(p);
    const PremiumValueDistribution dist(family, p);
    const CdfEvaluator numeric = CdfEvaluator::from(dist, false);
    for (double v : vp_grid) {
      CrosscheckRow row;
      row.family = family;
      row.p_eps = p;
      row.v_p = v;
      row.closed_form_bid = sira_bid(family, v, p);
      row.quadrature_bid = sira_bid_generic(numeric, v, p);
      row.abs_diff = std::abs(row.closed_form_bid - row.quadrature_bid);
      result.max_abs_diff = std::max(result.max_abs_diff, row.abs_diff);
      result.rows.push_back(row);
    }
  }
  return result;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::round(x * 1e12) / 1e12;
  }
  out.back() = hi;
  return out;
}

}  // namespace sira
