// CLI commands as library functions, so tests can drive them directly.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "siteopt/soc_model.hpp"
#include "siteopt/throughput.hpp"

namespace siteopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitInputError = 2;

enum class SweepParam { kChannels, kDepth, kContactYield, kManufYield, kSites };

struct SweepSpec {
  SweepParam param = SweepParam::kChannels;
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};

// "channels:256:512:64" and the like. Throws std::invalid_argument.
SweepSpec parse_sweep_spec(const std::string& text);

// Vector depth with binary suffixes: 48K = 48*1024, 1M = 1024*1024,
// fractional values rounded to the nearest vector. Throws
// std::invalid_argument on malformed input.
std::int64_t parse_depth(const std::string& text);
std::vector<std::int64_t> parse_depth_list(const std::string& text);

struct RunConfig {
  std::vector<std::string> soc_paths;
  AteSpec ate;
  ThroughputParams params;
  std::string format = "text";              // text | csv | json
  bool run_oracle = false;
  std::optional<SweepSpec> sweep;
  std::vector<std::int64_t> depths;         // bench-table depths
  std::string expected_path;                // optional bench-table reference
  double channel_block_cost = 8000.0;       // per 16 extra channels
  double memory_block_cost = 1500.0;        // per 16 channels depth-doubled
  double budget = 0.0;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string output;        // stdout payload
  std::string diagnostics;   // stderr payload
};

CommandResult cmd_optimize(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);
CommandResult cmd_bench_table(const RunConfig& cfg);
CommandResult cmd_compare_upgrades(const RunConfig& cfg);

}  // namespace siteopt
