#include "sira/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sira/error.hpp"

namespace sira::cli {
namespace {

using nlohmann::json;

struct HelpRequested {
  std::string text;
};

constexpr const char* kKeys[] = {"command", "family",   "p-eps", "n",         "gamma",
                                 "pairing", "pool",     "seed",  "rounds",    "probe-vd",
                                 "probe-vp", "opponents", "deltas", "samples", "bins",
                                 "vp-points", "format",  "output", "workers"};

std::string fmt9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(key + ": expected a number, got '" + text + "'");
  }
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw UsageError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw UsageError(key + ": integer out of range: '" + text + "'");
  }
}

// "a:b:n" is an n-point inclusive grid, otherwise a comma-separated list.
std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  if (text.empty()) throw UsageError(key + ": empty value");
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    const double lo = parse_real(key, text.substr(0, c1));
    const double hi = parse_real(key, text.substr(c1 + 1, c2 - c1 - 1));
    const auto n = parse_count(key, text.substr(c2 + 1));
    if (n < 1) throw UsageError(key + ": grid needs at least one point");
    return linear_grid(lo, hi, static_cast<std::size_t>(n));
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  return out;
}

std::string as_text(const std::string& key, const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  if (value.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << value.get<double>();
    return os.str();
  }
  throw UsageError(key + ": unsupported value " + value.dump());
}

std::vector<double> as_grid(const std::string& key, const json& value) {
  if (value.is_array()) {
    std::vector<double> out;
    for (const auto& item : value) {
      if (!item.is_number()) throw UsageError(key + ": array entries must be numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }
  if (value.is_number()) return {value.get<double>()};
  return parse_grid(key, as_text(key, value));
}

void set_field(RunSpec& spec, const std::string& key, const json& value) {
  auto text = [&] { return as_text(key, value); };
  auto count = [&] { return static_cast<std::size_t>(parse_count(key, text())); };
  if (key == "command") {
    const auto c = parse_command(text());
    if (!c) throw UsageError("command: unknown subcommand '" + text() + "'");
    spec.command = *c;
  } else if (key == "family") {
    try {
      spec.family = parse_value_family(text());
    } catch (const DomainError&) {
      throw UsageError("family: expected uniform or beta, got '" + text() + "'");
    }
  } else if (key == "p-eps") {
    spec.p_eps = as_grid(key, value);
  } else if (key == "n") {
    spec.n_agents = count();
  } else if (key == "gamma") {
    spec.gamma = parse_real(key, text());
  } else if (key == "pairing") {
    try {
      spec.pairing = parse_pairing_mode(text());
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  } else if (key == "pool") {
    try {
      spec.pool = parse_opponent_pool(text());
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  } else if (key == "seed") {
    spec.seed = parse_count(key, text());
  } else if (key == "rounds") {
    spec.rounds = count();
  } else if (key == "probe-vd") {
    spec.probe.deployment_value = parse_real(key, text());
  } else if (key == "probe-vp") {
    spec.probe.premium_value = parse_real(key, text());
  } else if (key == "opponents") {
    spec.n_opponents = count();
  } else if (key == "deltas") {
    spec.deltas = as_grid(key, value);
  } else if (key == "samples") {
    spec.n_samples = count();
  } else if (key == "bins") {
    spec.bins = count();
  } else if (key == "vp-points") {
    spec.vp_points = count();
  } else if (key == "format") {
    const std::string f = text();
    if (f == "csv") {
      spec.format = OutputFormat::Csv;
    } else if (f == "json") {
      spec.format = OutputFormat::Json;
    } else {
      throw UsageError("format: expected csv or json, got '" + f + "'");
    }
  } else if (key == "output") {
    spec.output = text();
  } else if (key == "workers") {
    spec.workers = static_cast<unsigned>(count());
  } else {
    throw UsageError("unknown configuration key '" + key + "'");
  }
}

void fill_defaults(RunSpec& spec) {
  if (spec.p_eps.empty()) {
    switch (spec.command) {
      case Command::Sweep:
        spec.p_eps = linear_grid(0.1, 0.9, 17);
        break;
      case Command::Crosscheck:
        spec.p_eps = {0.1, 0.25, 0.5, 0.75, 0.9};
        break;
      default:
        spec.p_eps = {0.5};
    }
  }
  if (spec.deltas.empty()) spec.deltas = linear_grid(-0.5, 0.5, 41);
}

void validate(const RunSpec& spec) {
  for (double p : spec.p_eps) {
    if (!(p >= kMinPrice && p <= kMaxPrice)) {
      throw UsageError("p-eps: out of range [1e-6, 1 - 1e-6], got " + fmt9(p));
    }
  }
  const bool grid_command = spec.command == Command::Sweep || spec.command == Command::Crosscheck;
  if (!grid_command && spec.p_eps.size() != 1) {
    throw UsageError("p-eps: this subcommand takes a single value");
  }
  if (!(spec.gamma > 0.0)) throw UsageError("gamma: must be positive");
  if (spec.workers < 1) throw UsageError("workers: must be at least 1");
  switch (spec.command) {
    case Command::Auction:
    case Command::Reserve:
    case Command::Repeat:
      if (spec.n_agents < 2) throw UsageError("n: need at least 2 agents");
      if (spec.rounds < 1) throw UsageError("rounds: must be at least 1");
      if (spec.pairing == PairingMode::PerfectMatching && spec.pool == OpponentPool::EquilibriumModel) {
        throw UsageError("pairing: matching requires --pool accepted");
      }
      break;
    case Command::Sweep:
      if (spec.n_agents < 10000) throw UsageError("n: a sweep needs at least 10000 agents");
      break;
    case Command::Deviation:
      if (spec.n_opponents < 1000) throw UsageError("opponents: need at least 1000");
      if (!(spec.probe.premium_value >= 0.0 && spec.probe.premium_value <= 0.5)) {
        throw UsageError("probe-vp: must lie in [0, 1/2]");
      }
      if (!(spec.probe.deployment_value >= 0.0 && spec.probe.deployment_value <= 1.0)) {
        throw UsageError("probe-vd: must lie in [0, 1]");
      }
      for (double d : spec.deltas) {
        if (!(d >= -1.0 && d <= 1.0)) throw UsageError("deltas: each must lie in [-1, 1]");
      }
      break;
    case Command::ValidateDist:
      if (spec.n_samples < 100000) throw UsageError("samples: need at least 100000");
      if (spec.bins < 10) throw UsageError("bins: need at least 10");
      break;
    case Command::Crosscheck:
      if (spec.vp_points < 2) throw UsageError("vp-points: need at least 2");
      break;
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("config: cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config: '" + path + "' is not valid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------- rendering

struct Document {
  std::vector<std::pair<std::string, std::string>> summary;  // CSV header lines
  json summary_json = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> csv_rows;
  std::string rows_key = "rows";
  json rows_json = json::array();

  void add_summary(const std::string& key, double value) {
    summary.emplace_back(key, fmt9(value));
    summary_json[key] = value;
  }
  void add_summary(const std::string& key, std::size_t value) {
    summary.emplace_back(key, std::to_string(value));
    summary_json[key] = value;
  }
};

std::string bit(bool b) { return b ? "1" : "0"; }

void add_auction_summary(Document& doc, const AuctionReport& report) {
  const AuctionSummary& s = report.summary;
  doc.add_summary("epsilon", report.config.epsilon());
  doc.add_summary("participation_rate", s.participation_rate);
  doc.add_summary("se_participation", s.se_participation);
  doc.add_summary("mean_bid", s.mean_bid);
  doc.add_summary("se_bid", s.se_bid);
  doc.add_summary("mean_realized_utility", s.mean_realized_utility);
  doc.add_summary("participants", s.participants);
  doc.add_summary("accepted", s.accepted);
  doc.add_summary("premium_award_count", s.premium_award_count);
}

Document auction_document(const AuctionReport& report) {
  Document doc;
  add_auction_summary(doc, report);
  doc.rows_key = "agents";
  doc.columns = {"agent",         "total_value",   "scaling_factor", "deployment_value",
                 "premium_value", "raw_bid",       "bid",            "predicted_utility",
                 "submitted",     "accepted",      "won_premium",    "safety",
                 "realized_utility"};
  for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
    const AgentOutcome& o = report.outcomes[i];
    doc.csv_rows.push_back({std::to_string(i), fmt9(o.valuation.total_value),
                            fmt9(o.valuation.scaling_factor), fmt9(o.valuation.deployment_value),
                            fmt9(o.valuation.premium_value), fmt9(o.decision.raw_bid),
                            fmt9(o.decision.bid), fmt9(o.decision.predicted_utility),
                            bit(o.submitted), bit(o.accepted), bit(o.won_premium),
                            fmt9(o.decision.safety), fmt9(o.realized_utility)});
    json agent = {{"agent", i},
                  {"total_value", o.valuation.total_value},
                  {"scaling_factor", o.valuation.scaling_factor},
                  {"deployment_value", o.valuation.deployment_value},
                  {"premium_value", o.valuation.premium_value},
                  {"raw_bid", o.decision.raw_bid},
                  {"bid", o.decision.bid},
                  {"predicted_utility", o.decision.predicted_utility},
                  {"submitted", o.submitted},
                  {"accepted", o.accepted},
                  {"won_premium", o.won_premium},
                  {"safety", o.decision.safety},
                  {"opponent", o.opponent},
                  {"realized_utility", o.realized_utility}};
    if (!o.history.empty()) {
      json rounds = json::array();
      for (const RoundRecord& r : o.history) {
        rounds.push_back({{"round", r.round},
                          {"submitted", r.submitted},
                          {"accepted", r.accepted},
                          {"won_premium", r.won_premium},
                          {"deployed", r.deployed},
                          {"spend", r.spend},
                          {"cumulative_cost", r.cumulative_cost},
                          {"safety", r.safety},
                          {"value", r.value},
                          {"cumulative_utility", r.cumulative_utility}});
      }
      agent["history"] = std::move(rounds);
    }
    doc.rows_json.push_back(std::move(agent));
  }
  return doc;
}

Document repeat_document(const AuctionReport& report) {
  Document doc = auction_document(report);
  // CSV for repeated runs is one row per agent and round.
  doc.columns = {"agent", "round",  "submitted",       "accepted", "won_premium", "deployed",
                 "spend", "cumulative_cost", "safety", "value",    "cumulative_utility"};
  doc.csv_rows.clear();
  for (std::size_t i = 0; i < report.outcomes.size(); ++i) {
    for (const RoundRecord& r : report.outcomes[i].history) {
      doc.csv_rows.push_back({std::to_string(i), std::to_string(r.round), bit(r.submitted),
                              bit(r.accepted), bit(r.won_premium), bit(r.deployed), fmt9(r.spend),
                              fmt9(r.cumulative_cost), fmt9(r.safety), fmt9(r.value),
                              fmt9(r.cumulative_utility)});
    }
  }
  return doc;
}

Document deviation_document(const DeviationSweepResult& r) {
  Document doc;
  doc.add_summary("optimal_bid", r.optimal_bid);
  doc.add_summary("predicted_utility", r.predicted_utility);
  doc.columns = {"delta", "mean_utility", "std_err", "n_samples"};
  for (const DeviationPoint& p : r.points) {
    doc.csv_rows.push_back(
        {fmt9(p.delta), fmt9(p.mean_utility), fmt9(p.std_err), std::to_string(p.n_samples)});
    doc.rows_json.push_back({{"delta", p.delta},
                             {"bid", p.bid},
                             {"mean_utility", p.mean_utility},
                             {"std_err", p.std_err},
                             {"diff_vs_optimum", p.diff_vs_optimum},
                             {"diff_std_err", p.diff_std_err},
                             {"n_samples", p.n_samples}});
  }
  return doc;
}

Document sweep_document(const ThresholdSweepResult& r) {
  Document doc;
  double max_part = 0.0;
  double max_part_rel = 0.0;
  double max_bid = 0.0;
  double max_bid_rel = 0.0;
  for (const ThresholdPoint& p : r.points) {
    max_part = std::max(max_part, p.participation_uplift);
    if (p.reserve.participation_rate > 0.0) {
      max_part_rel = std::max(max_part_rel, p.participation_uplift / p.reserve.participation_rate);
    }
    max_bid = std::max(max_bid, p.bid_uplift);
    max_bid_rel = std::max(max_bid_rel, p.bid_uplift / p.p_eps);
  }
  doc.add_summary("max_participation_uplift", max_part);
  doc.add_summary("max_relative_participation_uplift", max_part_rel);
  doc.add_summary("max_bid_uplift", max_bid);
  doc.add_summary("max_relative_bid_uplift", max_bid_rel);
  doc.columns = {"p_eps", "mechanism", "participation_rate", "mean_bid", "se_participation", "se_bid"};
  for (const ThresholdPoint& p : r.points) {
    for (const auto& [name, stats] : {std::pair<std::string, const MechanismStats&>{"reserve", p.reserve},
                                      std::pair<std::string, const MechanismStats&>{"sira", p.sira}}) {
      doc.csv_rows.push_back({fmt9(p.p_eps), name, fmt9(stats.participation_rate),
                              fmt9(stats.mean_bid), fmt9(stats.se_participation),
                              fmt9(stats.se_bid)});
    }
    auto stats_json = [](const MechanismStats& s) {
      return json{{"participation_rate", s.participation_rate},
                  {"mean_bid", s.mean_bid},
                  {"se_participation", s.se_participation},
                  {"se_bid", s.se_bid}};
    };
    doc.rows_json.push_back({{"p_eps", p.p_eps},
                             {"reserve", stats_json(p.reserve)},
                             {"sira", stats_json(p.sira)},
                             {"participation_uplift", p.participation_uplift},
                             {"se_participation_uplift", p.se_participation_uplift},
                             {"bid_uplift", p.bid_uplift},
                             {"se_bid_uplift", p.se_bid_uplift}});
  }
  return doc;
}

Document validation_document(const DistributionValidation& v) {
  Document doc;
  doc.add_summary("pdf_sup_error", v.pdf_sup_error);
  doc.add_summary("cdf_sup_error", v.cdf_sup_error);
  doc.add_summary("ks_distance", v.ks_distance);
  doc.columns = {"bin_center", "empirical_density", "empirical_cumulative", "model_density",
                 "model_cumulative"};
  for (std::size_t i = 0; i < v.histogram.size(); ++i) {
    const HistogramBin& b = v.histogram[i];
    doc.csv_rows.push_back({fmt9(b.center), fmt9(b.density), fmt9(b.cumulative),
                            fmt9(v.model_density[i]), fmt9(v.model_cumulative[i])});
    doc.rows_json.push_back({{"bin_center", b.center},
                             {"empirical_density", b.density},
                             {"empirical_cumulative", b.cumulative},
                             {"model_density", v.model_density[i]},
                             {"model_cumulative", v.model_cumulative[i]}});
  }
  return doc;
}

Document crosscheck_document(const CrosscheckResult& r) {
  Document doc;
  doc.add_summary("max_abs_diff", r.max_abs_diff);
  doc.columns = {"family", "p_eps", "v_p", "closed_form_bid", "quadrature_bid", "abs_diff"};
  for (const CrosscheckRow& row : r.rows) {
    const std::string family(to_string(row.family));
    doc.csv_rows.push_back({family, fmt9(row.p_eps), fmt9(row.v_p), fmt9(row.closed_form_bid),
                            fmt9(row.quadrature_bid), fmt9(row.abs_diff)});
    doc.rows_json.push_back({{"family", family},
                             {"p_eps", row.p_eps},
                             {"v_p", row.v_p},
                             {"closed_form_bid", row.closed_form_bid},
                             {"quadrature_bid", row.quadrature_bid},
                             {"abs_diff", row.abs_diff}});
  }
  return doc;
}

Document build_document(const RunSpec& spec) {
  switch (spec.command) {
    case Command::Auction:
      return auction_document(run_sira(spec.auction_config()));
    case Command::Reserve:
      return auction_document(run_reserve_threshold(spec.auction_config()));
    case Command::Repeat:
      return repeat_document(run_repeated_sira(spec.auction_config()));
    case Command::Deviation:
      return deviation_document(deviation_sweep(spec.family, spec.p_eps.front(), spec.probe,
                                                spec.n_opponents, spec.deltas, spec.seed,
                                                spec.workers));
    case Command::Sweep:
      return sweep_document(
          threshold_sweep(spec.family, spec.p_eps, spec.n_agents, spec.seed, spec.gamma, spec.workers));
    case Command::ValidateDist:
      return validation_document(validate_product_distribution(
          spec.family, spec.p_eps.front(), spec.n_samples, spec.bins, spec.seed, spec.workers));
    case Command::Crosscheck:
      return crosscheck_document(
          closed_form_vs_quadrature(spec.family, linear_grid(0.0, 0.5, spec.vp_points), spec.p_eps));
  }
  throw LogicError("unhandled command");
}

std::string default_file_name(const RunSpec& spec) {
  return std::string(to_string(spec.command)) + (spec.format == OutputFormat::Csv ? ".csv" : ".json");
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Auction:
      return "auction";
    case Command::Reserve:
      return "reserve";
    case Command::Repeat:
      return "repeat";
    case Command::Deviation:
      return "deviation";
    case Command::Sweep:
      return "sweep";
    case Command::ValidateDist:
      return "validate-dist";
    case Command::Crosscheck:
      return "crosscheck";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::Auction, Command::Reserve, Command::Repeat, Command::Deviation,
                    Command::Sweep, Command::ValidateDist, Command::Crosscheck}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

json RunSpec::config_echo() const {
  return json{{"command", std::string(to_string(command))},
              {"family", std::string(to_string(family))},
              {"p-eps", p_eps},
              {"n", n_agents},
              {"gamma", gamma},
              {"pairing", std::string(to_string(pairing))},
              {"pool", std::string(to_string(pool))},
              {"seed", seed},
              {"rounds", rounds},
              {"probe-vd", probe.deployment_value},
              {"probe-vp", probe.premium_value},
              {"opponents", n_opponents},
              {"deltas", deltas},
              {"samples", n_samples},
              {"bins", bins},
              {"vp-points", vp_points},
              {"format", format == OutputFormat::Csv ? "csv" : "json"}};
}

AuctionConfig RunSpec::auction_config() const {
  AuctionConfig c;
  c.n_agents = n_agents;
  c.p_eps = p_eps.front();
  c.family = family;
  c.gamma = gamma;
  c.pairing = pairing;
  c.opponent_pool = pool;
  c.seed = seed;
  c.rounds = rounds;
  c.workers = workers;
  return c;
}

bool operator==(const RunSpec& a, const RunSpec& b) { return a.config_echo() == b.config_echo(); }

void apply_config_json(RunSpec& spec, const json& object) {
  if (!object.is_object()) throw UsageError("config: expected a JSON object");
  const json& fields = object.contains("config") && object.at("config").is_object()
                           ? object.at("config")
                           : object;
  for (const auto& [key, value] : fields.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw UsageError("config: unknown key '" + key + "'");
    }
    set_field(spec, key, value);
  }
}

RunSpec parse_run_spec(const std::vector<std::string>& args) {
  CLI::App app{"Reserve Thresholding and SIRA all-pay auction simulator", std::string(kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  const std::pair<const char*, const char*> commands[] = {
      {"auction", "run one SIRA auction"},
      {"reserve", "run Reserve Thresholding"},
      {"repeat", "run repeated SIRA auctions (--rounds)"},
      {"deviation", "unilateral bid deviation sweep for one probe agent"},
      {"sweep", "participation and bid size over a p-eps grid, both mechanisms"},
      {"validate-dist", "Monte Carlo check of the premium-value PDF/CDF"},
      {"crosscheck", "closed-form bids against quadrature of the generic bid"}};
  for (const auto& [name, desc] : commands) app.add_subcommand(name, desc)->fallthrough();

  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  const std::pair<const char*, const char*> flags[] = {
      {"family", "uniform | beta"},
      {"p-eps", "price of safety: value, list a,b,c or grid lo:hi:n"},
      {"n", "number of agents"},
      {"gamma", "cost exponent, M(s) = s^gamma"},
      {"pairing", "independent | matching"},
      {"pool", "accepted | equilibrium (opponent source)"},
      {"seed", "64-bit seed (default: drawn and echoed)"},
      {"rounds", "auction rounds for repeat"},
      {"probe-vd", "probe agent deployment value (deviation)"},
      {"probe-vp", "probe agent premium value (deviation)"},
      {"opponents", "opponent samples (deviation)"},
      {"deltas", "deviation fractions: list or lo:hi:n"},
      {"samples", "product samples (validate-dist)"},
      {"bins", "histogram bins (validate-dist)"},
      {"vp-points", "v_p grid points (crosscheck)"},
      {"format", "csv | json"},
      {"output", "output path (default $SIRA_OUTPUT_DIR/<command>.<ext> or stdout)"},
      {"workers", "worker threads; results do not depend on it"}};
  for (const auto& [name, desc] : flags) {
    opts[name] = app.add_option(std::string("--") + name, raw[name], desc);
  }
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file or previously emitted JSON report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(kToolVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunSpec spec;
  bool seed_given = false;
  if (!config_path.empty()) {
    const json file = read_json_file(config_path);
    apply_config_json(spec, file);
    const json& fields = file.contains("config") ? file.at("config") : file;
    seed_given = fields.contains("seed");
  }
  const auto subs = app.get_subcommands();
  spec.command = *parse_command(subs.front()->get_name());
  for (const auto& [name, opt] : opts) {
    if (opt->count() > 0) set_field(spec, name, json(raw[name]));
  }
  if (opts["seed"]->count() > 0) seed_given = true;
  if (!seed_given) {
    std::random_device rd;
    spec.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  fill_defaults(spec);
  validate(spec);
  return spec;
}

std::string render(const RunSpec& spec) {
  const Document doc = build_document(spec);
  const json echo = spec.config_echo();
  if (spec.format == OutputFormat::Json) {
    json out = {{"tool", std::string(kToolName)},
                {"version", std::string(kToolVersion)},
                {"config", echo},
                {"seed", spec.seed},
                {"summary", doc.summary_json},
                {doc.rows_key, doc.rows_json}};
    return out.dump(1) + "\n";
  }
  std::ostringstream os;
  os << "# " << kToolName << ' ' << kToolVersion << '\n';
  os << "# config: " << echo.dump() << '\n';
  os << "# seed: " << spec.seed << '\n';
  for (const auto& [key, value] : doc.summary) os << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < doc.columns.size(); ++i) os << (i ? "," : "") << doc.columns[i];
  os << '\n';
  for (const auto& row : doc.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

std::string execute(const RunSpec& spec, std::ostream& out) {
  std::string path = spec.output;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      path = (std::filesystem::path(dir) / default_file_name(spec)).string();
    }
  }
  const std::string text = render(spec);
  if (path.empty() || path == "-") {
    out << text;
    return {};
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
  return path;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  try {
    spec = parse_run_spec(args);
  } catch (const HelpRequested& help) {
    out << help.text;
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    const std::string path = execute(spec, out);
    if (!path.empty()) err << "wrote " << path << " (seed " << spec.seed << ")\n";
    return kOk;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace sira::cli
