#include "siteopt/oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "siteopt/wrapper.hpp"

namespace siteopt::oracle {

namespace {

constexpr std::int64_t kNoTime = std::numeric_limits<std::int64_t>::max();

void check_module_caps(const ModuleSpec& m) {
  if (m.scan_chains() > kMaxScanChains)
    throw std::domain_error("oracle cap: module " + m.name + " has more than " +
                            std::to_string(kMaxScanChains) + " scan chains");
  if (m.inputs + m.outputs + 2 * m.bidirs > kMaxIoCells)
    throw std::domain_error("oracle cap: module " + m.name + " has more than " +
                            std::to_string(kMaxIoCells) + " wrapper cells");
}

// Minimal possible maximum after spreading `cells` one-bit cells over
// the chain loads. Cells are unit items, so always topping up the
// currently shortest chain is exact.
std::int64_t spread_cells_max(std::vector<std::int64_t> load, int cells) {
  for (int c = 0; c < cells; ++c) {
    int j = 0;
    for (int i = 1; i < static_cast<int>(load.size()); ++i)
      if (load[i] < load[j]) j = i;
    ++load[j];
  }
  return *std::max_element(load.begin(), load.end());
}

}  // namespace

std::int64_t exhaustive_wrapper_time(const ModuleSpec& m, int width) {
  check_module_caps(m);
  if (width < 1 || width > kMaxTamWidth)
    throw std::domain_error("oracle cap: width must be in 1.." +
                            std::to_string(kMaxTamWidth));

  const int s = m.scan_chains();
  const int in_cells = m.inputs + m.bidirs;
  const int out_cells = m.outputs + m.bidirs;

  std::int64_t best = kNoTime;
  std::vector<int> assign(s, 0);
  while (true) {
    std::vector<std::int64_t> load(width, 0);
    for (int i = 0; i < s; ++i) load[assign[i]] += m.scan_lengths[i];
    std::int64_t si = spread_cells_max(load, in_cells);
    std::int64_t so = spread_cells_max(load, out_cells);
    best = std::min(best, wrapper_cycles(si, so, m.patterns));

    int pos = 0;
    while (pos < s && ++assign[pos] == width) {
      assign[pos] = 0;
      ++pos;
    }
    if (pos == s) break;
  }
  return best;
}

FitResult brute_force_fit(const SocDescription& soc, const AteSpec& ate) {
  check_soc(soc);
  check_ate(ate);
  const int count = static_cast<int>(soc.modules.size());
  if (count > kMaxModules)
    throw std::domain_error("oracle cap: more than " +
                            std::to_string(kMaxModules) + " modules");
  if (ate.channels > kMaxChannels)
    throw std::domain_error("oracle cap: more than " +
                            std::to_string(kMaxChannels) + " channels");
  for (const auto& m : soc.modules) check_module_caps(m);

  const std::int64_t V = ate.depth;
  const int max_w = std::min(kMaxTamWidth, ate.channels / 2);

  // time[i][w-1]: exact test time of module i at width w, kNoTime when
  // it exceeds the vector depth.
  std::vector<std::vector<std::int64_t>> time(count);
  for (int i = 0; i < count; ++i) {
    bool any = false;
    for (int w = 1; w <= max_w; ++w) {
      std::int64_t t = exhaustive_wrapper_time(soc.modules[i], w);
      time[i].push_back(t <= V ? t : kNoTime);
      any = any || t <= V;
    }
    if (!any)
      return Infeasible{
          "the SOC cannot be tested on the target ATE: module " +
          soc.modules[i].name + " does not fit the vector memory at any width"};
  }

  int best_k = std::numeric_limits<int>::max();
  std::int64_t best_t = kNoTime;
  std::vector<std::vector<int>> best_groups;   // member indices per group
  std::vector<int> best_widths;

  std::vector<int> part(count, 0);
  std::vector<int> widths;

  // For a fixed partition, enumerate every combination of even group
  // widths; keep the lexicographically best (channels, test time).
  auto try_widths = [&](const std::vector<std::vector<int>>& grp) {
    const int ng = static_cast<int>(grp.size());
    widths.assign(ng, 1);
    while (true) {
      int k = 0;
      std::int64_t t = 0;
      bool ok = true;
      for (int g = 0; g < ng && ok; ++g) {
        std::int64_t d = 0;
        for (int mi : grp[g]) {
          std::int64_t mt = time[mi][widths[g] - 1];
          if (mt == kNoTime) {
            ok = false;
            break;
          }
          d += mt;
        }
        if (!ok || d > V) {
          ok = false;
          break;
        }
        k += 2 * widths[g];
        t = std::max(t, d);
      }
      if (ok && k <= ate.channels &&
          (k < best_k || (k == best_k && t < best_t))) {
        best_k = k;
        best_t = t;
        best_groups = grp;
        best_widths = widths;
      }
      int pos = 0;
      while (pos < ng && ++widths[pos] > max_w) {
        widths[pos] = 1;
        ++pos;
      }
      if (pos == ng) break;
    }
  };

  // Restricted-growth enumeration of set partitions.
  auto recurse = [&](auto&& self, int i, int ngroups) -> void {
    if (i == count) {
      std::vector<std::vector<int>> grp(ngroups);
      for (int j = 0; j < count; ++j) grp[part[j]].push_back(j);
      try_widths(grp);
      return;
    }
    for (int g = 0; g <= ngroups; ++g) {
      part[i] = g;
      self(self, i + 1, ngroups + (g == ngroups ? 1 : 0));
    }
  };
  recurse(recurse, 0, 0);

  if (best_k > ate.channels)
    return Infeasible{
        "the SOC cannot be tested on the target ATE: no channel assignment "
        "fits the channel budget"};

  Architecture arch;
  arch.channels = best_k;
  arch.test_cycles = best_t;
  for (std::size_t g = 0; g < best_groups.size(); ++g) {
    ChannelGroup out;
    out.width = 2 * best_widths[g];
    std::int64_t d = 0;
    for (int mi : best_groups[g]) {
      out.members.push_back(soc.modules[mi].name);
      d += time[mi][best_widths[g] - 1];
    }
    out.depth = d;
    std::sort(out.members.begin(), out.members.end());
    arch.groups.push_back(std::move(out));
  }
  std::sort(arch.groups.begin(), arch.groups.end(),
            [](const ChannelGroup& a, const ChannelGroup& b) {
              if (a.width != b.width) return a.width > b.width;
              return a.members < b.members;
            });
  return arch;
}

}  // namespace siteopt::oracle
