#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sira/experiments.hpp"
#include "sira/mechanism.hpp"

namespace sira::cli {

inline constexpr std::string_view kToolName = "sira-sim";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "SIRA_OUTPUT_DIR";

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Auction, Reserve, Repeat, Deviation, Sweep, ValidateDist, Crosscheck };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

struct RunSpec {
  Command command = Command::Auction;
  ValueFamily family = ValueFamily::Uniform01;
  std::vector<double> p_eps;  // one value, or the grid for sweep/crosscheck
  std::size_t n_agents = 100000;
  double gamma = 1.0;
  PairingMode pairing = PairingMode::IndependentOpponent;
  OpponentPool pool = OpponentPool::AcceptedAgents;
  std::uint64_t seed = 0;
  std::size_t rounds = 1;
  ProbeValuation probe;
  std::size_t n_opponents = 100000;
  std::vector<double> deltas;
  std::size_t n_samples = 1000000;
  std::size_t bins = 200;
  std::size_t vp_points = 200;
  OutputFormat format = OutputFormat::Csv;
  std::string output;   // empty: $SIRA_OUTPUT_DIR/<command>.<ext>, else stdout
  unsigned workers = 1; // never echoed; results do not depend on it

  // Everything that determines the artifact, keyed like the long flags.
  nlohmann::json config_echo() const;
  AuctionConfig auction_config() const;
};

bool operator==(const RunSpec& a, const RunSpec& b);

// Parses arguments (without the program name). A --config JSON file is read
// first; flags given on the command line override its values. The file may
// be a flat object of flag names or a previously emitted JSON report, whose
// "config" block is used. Throws UsageError naming the offending field.
// When no seed is given anywhere one is drawn from std::random_device.
RunSpec parse_run_spec(const std::vector<std::string>& args);

// Applies a JSON object of flag-name keys onto spec; unknown keys are rejected.
void apply_config_json(RunSpec& spec, const nlohmann::json& object);

// Renders the artifact for spec as it would be written to disk.
std::string render(const RunSpec& spec);

// Renders and writes to the spec's destination. Returns the path written, or
// an empty string for stdout. Throws IoError with the path on failure.
std::string execute(const RunSpec& spec, std::ostream& out);

// Full entry point: parse, execute, map failures to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sira::cli
