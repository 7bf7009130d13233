// Test architecture: channel groups shared by modules, channel count per
// site, and the site count that maximizes throughput.
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "siteopt/soc_model.hpp"
#include "siteopt/throughput.hpp"

namespace siteopt {

struct ChannelGroup {
  int width = 2;                     // tester channels, always even
  std::vector<std::string> members;  // module names, assignment order
  std::int64_t depth = 0;            // cycles used of the vector memory
};

struct Architecture {
  std::vector<ChannelGroup> groups;
  int channels = 0;                  // per-site channel count k
  std::int64_t test_cycles = 0;      // max group depth

  int tam_width() const { return channels / 2; }
};

struct Infeasible {
  std::string message;
};

using FitResult = std::variant<Architecture, Infeasible>;

// Greedy fit minimizing the per-site channel count: modules sorted by
// falling channel demand, each admitted into the group whose depth grows
// least; when none fits, either a fresh group is opened or an existing
// group is widened, whichever leaves the most free vector memory.
FitResult fit_step1(const SocDescription& soc, const AteSpec& ate);

// Highest site count the channel budget allows. With broadcast the
// stimulus half of each group is shared across sites.
// Throws std::invalid_argument when channels_per_site exceeds the budget.
int max_sites(int channels_per_site, int ate_channels, bool broadcast);

struct SitePlan {
  int sites = 0;
  Architecture arch;
  double manuf_time_s = 0.0;
  double app_time_s = 0.0;
  double pass_contact = 1.0;
  double pass_manuf = 1.0;
  double devices_per_hour = 0.0;
  double unique_devices_per_hour = 0.0;
  bool retest_model_strained = false;
};

struct OptimizationResult {
  Architecture base;                 // fit at the minimal channel count
  int n_max = 0;
  int n_opt = 0;
  std::vector<SitePlan> curve;       // n = n_max down to 1

  const SitePlan& best() const;
  const SitePlan* plan_for(int sites) const;
};

using OptimizeResult = std::variant<OptimizationResult, Infeasible>;

// For every site count from n_max down to 1, spreads the channels left
// over by replication across the groups (deepest first) and evaluates
// throughput; picks the best site count, preferring more sites on ties.
OptimizeResult optimize_step2(const SocDescription& soc, const AteSpec& ate,
                              const ThroughputParams& params);

}  // namespace siteopt
