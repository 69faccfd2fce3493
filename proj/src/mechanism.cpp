#include "sira/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sira/error.hpp"
#include "sira/parallel.hpp"

namespace sira {
namespace {

struct RoundComparison {
  std::vector<char> won;
  std::vector<std::int64_t> opponent;
};

// Pairs and compares the accepted agents of one round. Every random draw is
// keyed by (seed, purpose, round, agent) or (seed, purpose, round), so the
// outcome does not depend on the worker count.
RoundComparison compare_round(const AuctionConfig& config, std::span<const BidDecision> decisions,
                              const std::vector<char>& accepted, std::size_t round) {
  const std::size_t n = decisions.size();
  RoundComparison out{std::vector<char>(n, 0), std::vector<std::int64_t>(n, -1)};

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) {
    if (accepted[i]) pool.push_back(i);
  }
  const std::size_t m = pool.size();

  if (config.opponent_pool == OpponentPool::EquilibriumModel) {
    parallel_for(m, config.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = pool[k];
        Stream rng = Stream::keyed(config.seed, {stream_purpose::equilibrium_opponent, round, i});
        const double rival = draw_equilibrium_opponent_bid(config.family, config.p_eps, rng);
        out.won[i] = compare_pair(decisions[i].bid, rival, config.tie_rule, rng) == Winner::First;
      }
    });
    return out;
  }

  // A lone accepted agent has nobody to be compared with and wins nothing.
  if (m < 2) return out;

  auto draw_other = [&](std::size_t k) {
    Stream rng = Stream::keyed(config.seed, {stream_purpose::pairing, round, pool[k]});
    const auto r = static_cast<std::size_t>(rng.below(m - 1));
    const std::size_t j = pool[r >= k ? r + 1 : r];
    return std::pair{j, rng};
  };

  if (config.pairing == PairingMode::IndependentOpponent) {
    parallel_for(m, config.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = pool[k];
        auto [j, rng] = draw_other(k);
        out.opponent[i] = static_cast<std::int64_t>(j);
        out.won[i] =
            compare_pair(decisions[i].bid, decisions[j].bid, config.tie_rule, rng) == Winner::First;
      }
    });
    return out;
  }

  // PerfectMatching: Fisher-Yates shuffle of positions, then consecutive pairs.
  Stream rng = Stream::keyed(config.seed, {stream_purpose::matching, round});
  std::vector<std::size_t> order(m);
  for (std::size_t k = 0; k < m; ++k) order[k] = k;
  for (std::size_t k = m - 1; k > 0; --k) {
    std::swap(order[k], order[static_cast<std::size_t>(rng.below(k + 1))]);
  }
  for (std::size_t k = 0; k + 1 < m; k += 2) {
    const std::size_t a = pool[order[k]];
    const std::size_t b = pool[order[k + 1]];
    const bool a_wins =
        compare_pair(decisions[a].bid, decisions[b].bid, config.tie_rule, rng) == Winner::First;
    out.won[a] = a_wins;
    out.won[b] = !a_wins;
    out.opponent[a] = static_cast<std::int64_t>(b);
    out.opponent[b] = static_cast<std::int64_t>(a);
  }
  if (m % 2 == 1) {
    const std::size_t k = order[m - 1];
    const std::size_t i = pool[k];
    auto [j, odd_rng] = draw_other(k);
    out.opponent[i] = static_cast<std::int64_t>(j);
    out.won[i] = compare_pair(decisions[i].bid, decisions[j].bid, config.tie_rule, odd_rng) ==
                 Winner::First;
  }
  return out;
}

void check_population(const AuctionConfig& config, std::size_t valuations,
                      std::size_t decisions) {
  if (valuations != decisions) {
    throw ConfigError("valuations and decisions differ in length");
  }
  if (valuations != config.n_agents) {
    throw ConfigError("n_agents does not match the number of supplied valuations");
  }
}

std::vector<BidDecision> decide_all(const AuctionConfig& config,
                                    std::span<const AgentValuation> valuations) {
  const PremiumValueDistribution dist(config.family, config.p_eps);
  const SafetyCostModel model = config.cost_model();
  std::vector<BidDecision> decisions(valuations.size());
  parallel_for(valuations.size(), config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) decisions[i] = decide(valuations[i], dist, model);
  });
  return decisions;
}

}  // namespace

std::string_view to_string(PairingMode mode) {
  return mode == PairingMode::IndependentOpponent ? "independent" : "matching";
}

std::string_view to_string(OpponentPool pool) {
  return pool == OpponentPool::AcceptedAgents ? "accepted" : "equilibrium";
}

PairingMode parse_pairing_mode(std::string_view name) {
  if (name == "independent") return PairingMode::IndependentOpponent;
  if (name == "matching") return PairingMode::PerfectMatching;
  throw ConfigError("pairing: expected independent or matching, got '" + std::string(name) + "'");
}

OpponentPool parse_opponent_pool(std::string_view name) {
  if (name == "accepted") return OpponentPool::AcceptedAgents;
  if (name == "equilibrium") return OpponentPool::EquilibriumModel;
  throw ConfigError("pool: expected accepted or equilibrium, got '" + std::string(name) + "'");
}

void AuctionConfig::validate() const {
  if (n_agents < 2) throw ConfigError("n_agents: need at least 2 agents");
  if (!(p_eps >= kMinPrice && p_eps <= kMaxPrice)) {
    throw ConfigError("p_eps: out of range [1e-6, 1 - 1e-6], got " + std::to_string(p_eps));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma: must be positive");
  if (rounds < 1) throw ConfigError("rounds: must be at least 1");
  if (workers < 1) throw ConfigError("workers: must be at least 1");
  if (pairing == PairingMode::PerfectMatching && opponent_pool == OpponentPool::EquilibriumModel) {
    throw ConfigError("pairing: matching requires the accepted-agent opponent pool");
  }
}

AuctionSummary summarize(std::span<const AgentOutcome> outcomes) {
  AuctionSummary s;
  s.n_agents = outcomes.size();
  double bid_sum = 0.0;
  double bid_sq = 0.0;
  double util_sum = 0.0;
  double util_sq = 0.0;
  for (const auto& o : outcomes) {
    if (o.submitted) {
      ++s.participants;
      bid_sum += o.decision.bid;
      bid_sq += o.decision.bid * o.decision.bid;
    }
    if (o.accepted) ++s.accepted;
    if (o.history.empty()) {
      if (o.won_premium) ++s.premium_award_count;
    } else {
      for (const auto& r : o.history) {
        if (r.won_premium) ++s.premium_award_count;
      }
    }
    util_sum += o.realized_utility;
    util_sq += o.realized_utility * o.realized_utility;
  }
  if (s.n_agents == 0) return s;
  const auto n = static_cast<double>(s.n_agents);
  s.participation_rate = static_cast<double>(s.participants) / n;
  s.se_participation = std::sqrt(s.participation_rate * (1.0 - s.participation_rate) / n);
  s.mean_realized_utility = util_sum / n;
  if (s.n_agents > 1) {
    const double var = std::max(0.0, (util_sq - n * s.mean_realized_utility * s.mean_realized_utility) / (n - 1.0));
    s.se_realized_utility = std::sqrt(var / n);
  }
  if (s.participants > 0) {
    const auto k = static_cast<double>(s.participants);
    s.mean_bid = bid_sum / k;
    if (s.participants > 1) {
      const double var = std::max(0.0, (bid_sq - k * s.mean_bid * s.mean_bid) / (k - 1.0));
      s.se_bid = std::sqrt(var / k);
    }
  }
  return s;
}

std::vector<AgentValuation> sample_population(const AuctionConfig& config) {
  std::vector<AgentValuation> valuations(config.n_agents);
  parallel_for(config.n_agents, config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Stream rng = Stream::keyed(config.seed, {stream_purpose::valuation, i});
      valuations[i] = sample_agent_valuation(config.family, rng);
    }
  });
  return valuations;
}

Winner compare_pair(double bid_i, double bid_j, TieRule tie_rule, Stream& rng) {
  if (bid_i > bid_j) return Winner::First;
  if (bid_j > bid_i) return Winner::Second;
  switch (tie_rule) {
    case TieRule::FairCoin:
      return rng.coin() ? Winner::First : Winner::Second;
  }
  return Winner::Second;
}

double realize_utility(double bid, bool accepted, bool won, double v_d, double v_p) {
  if (won && !accepted) throw LogicError("realize_utility: won premium without acceptance");
  if (!accepted) return -bid;
  if (!won) return v_d - bid;
  return (v_d + v_p) - bid;
}

double draw_equilibrium_opponent_bid(ValueFamily family, double p_eps, Stream& rng) {
  const AgentValuation rival = sample_participant_valuation(family, p_eps, rng);
  return cap_bid(sira_bid(family, rival.premium_value, p_eps));
}

AuctionReport run_reserve_threshold(const AuctionConfig& config) {
  config.validate();
  return run_reserve_threshold(config, sample_population(config));
}

AuctionReport run_reserve_threshold(const AuctionConfig& config,
                                    std::span<const AgentValuation> valuations) {
  config.validate();
  check_population(config, valuations.size(), valuations.size());
  const SafetyCostModel model = config.cost_model();
  AuctionReport report{"reserve", config, std::vector<AgentOutcome>(valuations.size()), {}};
  parallel_for(valuations.size(), config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      AgentOutcome& o = report.outcomes[i];
      o.valuation = valuations[i];
      o.decision = reserve_threshold_bid(o.valuation.deployment_value, config.p_eps, model);
      o.submitted = o.decision.participates;
      o.accepted = o.submitted && o.decision.bid >= config.p_eps;
      o.spend = o.submitted ? o.decision.bid : 0.0;
      o.realized_utility =
          o.submitted ? realize_utility(o.decision.bid, o.accepted, false,
                                        o.valuation.deployment_value, o.valuation.premium_value)
                      : 0.0;
    }
  });
  report.summary = summarize(report.outcomes);
  return report;
}

AuctionReport run_sira(const AuctionConfig& config) {
  config.validate();
  return run_sira(config, sample_population(config));
}

AuctionReport run_sira(const AuctionConfig& config, std::span<const AgentValuation> valuations) {
  config.validate();
  const auto decisions = decide_all(config, valuations);
  return settle_sira(config, valuations, decisions);
}

AuctionReport settle_sira(const AuctionConfig& config, std::span<const AgentValuation> valuations,
                          std::span<const BidDecision> decisions) {
  config.validate();
  check_population(config, valuations.size(), decisions.size());
  const std::size_t n = valuations.size();

  std::vector<char> accepted(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    accepted[i] = decisions[i].participates && decisions[i].bid >= config.p_eps;
  }
  const RoundComparison cmp = compare_round(config, decisions, accepted, 0);

  AuctionReport report{"sira", config, std::vector<AgentOutcome>(n), {}};
  parallel_for(n, config.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      AgentOutcome& o = report.outcomes[i];
      o.valuation = valuations[i];
      o.decision = decisions[i];
      o.submitted = decisions[i].participates;
      o.accepted = accepted[i] != 0;
      o.won_premium = cmp.won[i] != 0;
      o.opponent = cmp.opponent[i];
      o.spend = o.submitted ? o.decision.bid : 0.0;
      o.realized_utility =
          o.submitted ? realize_utility(o.decision.bid, o.accepted, o.won_premium,
                                        o.valuation.deployment_value, o.valuation.premium_value)
                      : 0.0;
    }
  });
  report.summary = summarize(report.outcomes);
  return report;
}

AuctionReport run_repeated_sira(const AuctionConfig& config) {
  config.validate();
  return run_repeated_sira(config, sample_population(config));
}

AuctionReport run_repeated_sira(const AuctionConfig& config,
                                std::span<const AgentValuation> valuations) {
  config.validate();
  const auto decisions = decide_all(config, valuations);
  return settle_repeated_sira(config, valuations, decisions);
}

AuctionReport settle_repeated_sira(const AuctionConfig& config,
                                   std::span<const AgentValuation> valuations,
                                   std::span<const BidDecision> decisions) {
  config.validate();
  check_population(config, valuations.size(), decisions.size());
  const std::size_t n = valuations.size();
  const SafetyCostModel model = config.cost_model();

  AuctionReport report{"repeat", config, std::vector<AgentOutcome>(n), {}};
  std::vector<char> accepted(n, 0);
  std::vector<char> deployed(n, 0);
  std::vector<double> value_total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    AgentOutcome& o = report.outcomes[i];
    o.valuation = valuations[i];
    o.decision = decisions[i];
    o.submitted = decisions[i].participates;
    accepted[i] = o.submitted && decisions[i].bid >= config.p_eps;
    o.history.reserve(config.rounds);
  }

  for (std::size_t round = 0; round < config.rounds; ++round) {
    const RoundComparison cmp = compare_round(config, decisions, accepted, round);
    parallel_for(n, config.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        AgentOutcome& o = report.outcomes[i];
        RoundRecord r;
        r.round = round;
        r.submitted = o.submitted;
        r.accepted = accepted[i] != 0;
        r.won_premium = cmp.won[i] != 0;

        // Training only ever adds safety: spend tops the cost up to M(s).
        const double target_cost = o.submitted ? o.decision.bid : 0.0;
        r.spend = std::max(0.0, target_cost - o.spend);
        o.spend += r.spend;
        r.cumulative_cost = o.spend;
        r.safety = o.spend > 0.0 ? safety_from_bid(model, std::min(o.spend, 1.0)) : 0.0;

        double value = 0.0;
        if (r.accepted && !deployed[i]) {
          value = o.valuation.deployment_value;
          deployed[i] = 1;
          r.deployed = true;
        }
        if (r.won_premium) value = value + o.valuation.premium_value;
        r.value = value;
        value_total[i] = value_total[i] + value;
        r.cumulative_utility = value_total[i] - o.spend;

        o.accepted = o.accepted || r.accepted;
        o.won_premium = o.won_premium || r.won_premium;
        if (cmp.opponent[i] >= 0) o.opponent = cmp.opponent[i];
        o.realized_utility = r.cumulative_utility;
        o.history.push_back(r);
      }
    });
  }
  report.summary = summarize(report.outcomes);
  return report;
}

}  // namespace sira
