#include "siteopt/architecture.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "siteopt/wrapper.hpp"

namespace siteopt {

namespace {

constexpr const char* kInfeasibleMessage =
    "the SOC cannot be tested on the target ATE";

// Per-call memo of module test times by (module index, width). Never
// shared across calls: entries are only valid for one module list.
class TimeTable {
 public:
  explicit TimeTable(const std::vector<ModuleSpec>& modules)
      : modules_(&modules) {}

  std::int64_t at(int module_index, int width) {
    auto key = std::make_pair(module_index, width);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::int64_t t = test_time((*modules_)[module_index], width);
    cache_.emplace(key, t);
    return t;
  }

 private:
  const std::vector<ModuleSpec>* modules_;
  std::map<std::pair<int, int>, std::int64_t> cache_;
};

struct Group {
  int width = 0;
  std::vector<int> members;            // module indices, assignment order
  std::vector<std::int64_t> times;     // current per-member test times
  std::int64_t depth = 0;
};

std::int64_t group_depth(const Group& g) {
  std::int64_t d = 0;
  for (auto t : g.times) d += t;
  return d;
}

Architecture to_architecture(const std::vector<Group>& groups,
                             const std::vector<ModuleSpec>& modules) {
  Architecture arch;
  for (const auto& g : groups) {
    ChannelGroup out;
    out.width = g.width;
    out.depth = g.depth;
    for (int mi : g.members) out.members.push_back(modules[mi].name);
    arch.channels += g.width;
    arch.test_cycles = std::max(arch.test_cycles, g.depth);
    arch.groups.push_back(std::move(out));
  }
  return arch;
}

}  // namespace

FitResult fit_step1(const SocDescription& soc, const AteSpec& ate) {
  check_soc(soc);
  check_ate(ate);
  const auto& mods = soc.modules;
  const std::int64_t V = ate.depth;
  const int N = ate.channels;
  TimeTable times(mods);

  struct Item {
    int index;
    int k_min;
    std::int64_t bits;
  };
  std::vector<Item> items;
  for (int i = 0; i < static_cast<int>(mods.size()); ++i) {
    auto k = min_channels(mods[i], ate);
    if (!k)
      return Infeasible{std::string(kInfeasibleMessage) + ": module " +
                        mods[i].name +
                        " does not fit the vector memory at any width"};
    items.push_back({i, *k, mods[i].test_data_bits()});
  }
  std::sort(items.begin(), items.end(), [&](const Item& a, const Item& b) {
    if (a.k_min != b.k_min) return a.k_min > b.k_min;
    if (a.bits != b.bits) return a.bits > b.bits;
    return mods[a.index].name < mods[b.index].name;
  });

  std::vector<Group> groups;
  int total = 0;

  for (const auto& item : items) {
    if (groups.empty()) {
      Group g;
      g.width = item.k_min;
      g.members = {item.index};
      g.times = {times.at(item.index, item.k_min / 2)};
      g.depth = g.times[0];
      groups.push_back(std::move(g));
      total = item.k_min;
      continue;
    }

    // Admission: the group whose depth stays smallest, lowest index on
    // ties.
    int admit = -1;
    std::int64_t admit_depth = 0;
    for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
      std::int64_t d =
          groups[gi].depth + times.at(item.index, groups[gi].width / 2);
      if (d <= V && (admit < 0 || d < admit_depth)) {
        admit = gi;
        admit_depth = d;
      }
    }
    if (admit >= 0) {
      groups[admit].members.push_back(item.index);
      groups[admit].times.push_back(times.at(item.index, groups[admit].width / 2));
      groups[admit].depth = admit_depth;
      continue;
    }

    // No group admits the module. Either open a new group at its own
    // minimal width or widen one group just enough; keep whichever
    // leaves the most free vector memory across all used channels.
    std::int64_t base_free = 0;
    for (const auto& g : groups)
      base_free += static_cast<std::int64_t>(g.width) * (V - g.depth);

    struct Alternative {
      bool widen = false;
      int group = -1;
      int delta = 0;             // added channels
      std::int64_t free = 0;     // resulting total free memory
    };
    std::optional<Alternative> best;

    if (total + item.k_min <= N) {
      std::int64_t t = times.at(item.index, item.k_min / 2);
      best = Alternative{false, -1, item.k_min,
                         base_free + static_cast<std::int64_t>(item.k_min) *
                                         (V - t)};
    }
    for (int gi = 0; gi < static_cast<int>(groups.size()); ++gi) {
      const Group& g = groups[gi];
      // Past this width every member is at its shortest wrapper, so a
      // still-overfull group can never fit.
      int saturation = useful_width_limit(mods[item.index]);
      for (int mi : g.members) saturation += useful_width_limit(mods[mi]);
      for (int delta = 2; total + delta <= N; delta += 2) {
        int w = (g.width + delta) / 2;
        std::int64_t d = times.at(item.index, w);
        for (int mi : g.members) d += times.at(mi, w);
        if (d <= V) {
          std::int64_t free = base_free -
                              static_cast<std::int64_t>(g.width) * (V - g.depth) +
                              static_cast<std::int64_t>(g.width + delta) * (V - d);
          if (!best || free > best->free)
            best = Alternative{true, gi, delta, free};
          break;
        }
        if (w >= saturation) break;
      }
    }

    if (!best)
      return Infeasible{std::string(kInfeasibleMessage) + ": module " +
                        mods[item.index].name +
                        " cannot be placed within the channel budget"};

    if (!best->widen) {
      Group g;
      g.width = item.k_min;
      g.members = {item.index};
      g.times = {times.at(item.index, item.k_min / 2)};
      g.depth = g.times[0];
      groups.push_back(std::move(g));
    } else {
      Group& g = groups[best->group];
      g.width += best->delta;
      g.members.push_back(item.index);
      g.times.clear();
      for (int mi : g.members) g.times.push_back(times.at(mi, g.width / 2));
      g.depth = group_depth(g);
    }
    total += best->delta;
  }

  return to_architecture(groups, mods);
}

int max_sites(int channels_per_site, int ate_channels, bool broadcast) {
  if (channels_per_site < 2 || channels_per_site % 2 != 0)
    throw std::invalid_argument("channels per site must be even and >= 2");
  if (ate_channels < 2)
    throw std::invalid_argument("tester needs at least 2 channels");
  int n = broadcast ? 2 * ate_channels / channels_per_site - 1
                    : ate_channels / channels_per_site;
  if (n < 1)
    throw std::invalid_argument(
        "channel count per site exceeds the budget for even one site");
  return n;
}

const SitePlan& OptimizationResult::best() const {
  const SitePlan* p = plan_for(n_opt);
  if (!p) throw std::logic_error("no plan recorded for n_opt");
  return *p;
}

const SitePlan* OptimizationResult::plan_for(int sites) const {
  for (const auto& p : curve)
    if (p.sites == sites) return &p;
  return nullptr;
}

OptimizeResult optimize_step2(const SocDescription& soc, const AteSpec& ate,
                              const ThroughputParams& params) {
  FitResult fit = fit_step1(soc, ate);
  if (auto* inf = std::get_if<Infeasible>(&fit)) return *inf;
  const Architecture& base = std::get<Architecture>(fit);

  const auto& mods = soc.modules;
  TimeTable times(mods);
  std::map<std::string, int> index_of;
  for (int i = 0; i < static_cast<int>(mods.size()); ++i)
    index_of[mods[i].name] = i;

  // Internal mirror of the base groups, reused as the start of every
  // per-n redistribution.
  std::vector<Group> base_groups;
  for (const auto& g : base.groups) {
    Group b;
    b.width = g.width;
    for (const auto& name : g.members) {
      int mi = index_of.at(name);
      b.members.push_back(mi);
      b.times.push_back(times.at(mi, g.width / 2));
    }
    b.depth = group_depth(b);
    base_groups.push_back(std::move(b));
  }

  const int k_base = base.channels;
  OptimizationResult result;
  result.base = base;
  result.n_max = max_sites(k_base, ate.channels, params.broadcast);

  for (int n = result.n_max; n >= 1; --n) {
    std::vector<Group> groups = base_groups;
    std::int64_t k_free =
        params.broadcast
            ? ate.channels - static_cast<std::int64_t>(n + 1) * (k_base / 2)
            : ate.channels - static_cast<std::int64_t>(n) * k_base;
    const std::int64_t cost = params.broadcast ? n + 1 : 2 * n;

    while (k_free > cost) {
      int deepest = 0;
      for (int gi = 1; gi < static_cast<int>(groups.size()); ++gi)
        if (groups[gi].depth > groups[deepest].depth) deepest = gi;
      Group& g = groups[deepest];
      g.width += 2;
      // Re-wrap at the wider width, but a member keeps its previous
      // wrapper when the heuristic result at the new width is worse:
      // widening must never lengthen the test.
      for (std::size_t j = 0; j < g.members.size(); ++j) {
        std::int64_t t = times.at(g.members[j], g.width / 2);
        if (t < g.times[j]) g.times[j] = t;
      }
      g.depth = group_depth(g);
      k_free -= cost;
    }

    SitePlan plan;
    plan.sites = n;
    plan.arch = to_architecture(groups, mods);
    plan.manuf_time_s =
        static_cast<double>(plan.arch.test_cycles) / ate.freq_hz;
    plan.pass_contact =
        contact_pass_probability(params.contact_yield, plan.arch.channels, n);
    plan.pass_manuf = manuf_pass_probability(params.manufacturing_yield, n);
    plan.app_time_s =
        application_time(ate.contact_time_s, plan.manuf_time_s,
                         plan.pass_contact, plan.pass_manuf,
                         params.abort_on_fail);
    plan.devices_per_hour =
        devices_per_hour(n, ate.index_time_s, plan.app_time_s);
    UniqueThroughput u = unique_devices_per_hour(
        params.contact_yield, plan.arch.channels, plan.devices_per_hour);
    plan.unique_devices_per_hour = u.devices_per_hour;
    plan.retest_model_strained = u.model_strained;
    result.curve.push_back(std::move(plan));
  }

  // Curve runs from n_max down, so on ties the larger site count wins.
  int best_i = 0;
  for (int i = 1; i < static_cast<int>(result.curve.size()); ++i) {
    double v = params.retest ? result.curve[i].unique_devices_per_hour
                             : result.curve[i].devices_per_hour;
    double b = params.retest ? result.curve[best_i].unique_devices_per_hour
                             : result.curve[best_i].devices_per_hour;
    if (v > b) best_i = i;
  }
  result.n_opt = result.curve[best_i].sites;
  return result;
}

}  // namespace siteopt
