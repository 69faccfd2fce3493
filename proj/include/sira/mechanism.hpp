#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sira/random.hpp"
#include "sira/strategy.hpp"
#include "sira/value_model.hpp"

namespace sira {

enum class PairingMode {
  IndependentOpponent,  // each accepted agent meets one uniformly drawn other accepted agent
  PerfectMatching,      // random disjoint pairs; an odd agent out meets a drawn opponent
};

enum class TieRule { FairCoin };

// Where comparison opponents come from. AcceptedAgents is the auction as
// run by the regulator. EquilibriumModel draws each opponent independently
// from the population the bidding function is derived against: V from the
// family truncated to [p_eps, 1], lambda ~ U[0, 1/2], bidding the capped
// equilibrium bid.
enum class OpponentPool { AcceptedAgents, EquilibriumModel };

std::string_view to_string(PairingMode mode);
std::string_view to_string(OpponentPool pool);
PairingMode parse_pairing_mode(std::string_view name);
OpponentPool parse_opponent_pool(std::string_view name);

struct AuctionConfig {
  std::size_t n_agents = 100000;
  double p_eps = 0.5;
  ValueFamily family = ValueFamily::Uniform01;
  double gamma = 1.0;
  PairingMode pairing = PairingMode::IndependentOpponent;
  TieRule tie_rule = TieRule::FairCoin;
  OpponentPool opponent_pool = OpponentPool::AcceptedAgents;
  std::uint64_t seed = 0;
  std::size_t rounds = 1;
  // Thread count. Never changes results.
  unsigned workers = 1;

  // Throws ConfigError naming the offending field.
  void validate() const;
  SafetyCostModel cost_model() const { return SafetyCostModel(gamma); }
  // Regulator's safety threshold, M^-1(p_eps).
  double epsilon() const { return cost_model().safety(p_eps); }
};

struct RoundRecord {
  std::size_t round = 0;
  bool submitted = false;
  bool accepted = false;
  bool won_premium = false;
  bool deployed = false;         // deployment value granted in this round
  double spend = 0.0;            // incremental training spend this round
  double cumulative_cost = 0.0;  // M(s) of the current model
  double safety = 0.0;
  double value = 0.0;            // value gained this round
  double cumulative_utility = 0.0;
};

struct AgentOutcome {
  AgentValuation valuation;
  BidDecision decision;
  bool submitted = false;
  bool accepted = false;
  bool won_premium = false;
  double spend = 0.0;  // bid actually paid (0 for non-submitters)
  double realized_utility = 0.0;
  // Population index of the last comparison opponent; -1 when there was no
  // comparison or the opponent came from the equilibrium model.
  std::int64_t opponent = -1;
  std::vector<RoundRecord> history;  // repeated auctions only
};

struct AuctionSummary {
  std::size_t n_agents = 0;
  std::size_t participants = 0;
  std::size_t accepted = 0;
  std::size_t premium_award_count = 0;
  double participation_rate = 0.0;
  double mean_bid = 0.0;  // over participants; 0 when there are none
  double mean_realized_utility = 0.0;
  double se_participation = 0.0;
  double se_bid = 0.0;
  double se_realized_utility = 0.0;
};

struct AuctionReport {
  std::string mechanism;  // "reserve", "sira" or "repeat"
  AuctionConfig config;
  std::vector<AgentOutcome> outcomes;
  AuctionSummary summary;

  std::uint64_t seed() const { return config.seed; }
};

// Aggregates in agent-index order, so results are bit-reproducible.
AuctionSummary summarize(std::span<const AgentOutcome> outcomes);

// Valuation of agent i comes from Stream::keyed(seed, {valuation, i}).
std::vector<AgentValuation> sample_population(const AuctionConfig& config);

enum class Winner { First, Second };

// Strictly higher bid wins; an exact tie is a fair coin from rng.
Winner compare_pair(double bid_i, double bid_j, TieRule tie_rule, Stream& rng);

// -bid if not accepted, v_d - bid if accepted and lost, v_d + v_p - bid if won.
// Throws LogicError when won without being accepted.
double realize_utility(double bid, bool accepted, bool won, double v_d, double v_p);

AuctionReport run_reserve_threshold(const AuctionConfig& config);
AuctionReport run_reserve_threshold(const AuctionConfig& config,
                                    std::span<const AgentValuation> valuations);

AuctionReport run_sira(const AuctionConfig& config);
AuctionReport run_sira(const AuctionConfig& config, std::span<const AgentValuation> valuations);

// Settles a single SIRA round for given decisions: agents with
// decision.participates submit, those bidding at least p_eps are accepted and
// compared. Lets callers inject off-equilibrium bids.
AuctionReport settle_sira(const AuctionConfig& config, std::span<const AgentValuation> valuations,
                          std::span<const BidDecision> decisions);

AuctionReport run_repeated_sira(const AuctionConfig& config);
AuctionReport run_repeated_sira(const AuctionConfig& config,
                                std::span<const AgentValuation> valuations);
AuctionReport settle_repeated_sira(const AuctionConfig& config,
                                   std::span<const AgentValuation> valuations,
                                   std::span<const BidDecision> decisions);

// Capped equilibrium bid of an opponent drawn from the equilibrium model.
double draw_equilibrium_opponent_bid(ValueFamily family, double p_eps, Stream& rng);

}  // namespace sira
