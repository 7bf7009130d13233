#include "siteopt/wrapper.hpp"

#include <algorithm>
#include <stdexcept>

namespace siteopt {

namespace {

// Index of the minimal element; lowest index on ties.
template <typename Vec>
int argmin(const Vec& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] < v[best]) best = i;
  return best;
}

}  // namespace

std::int64_t wrapper_cycles(std::int64_t scan_in, std::int64_t scan_out,
                            std::int64_t patterns) {
  return (1 + std::max(scan_in, scan_out)) * patterns +
         std::min(scan_in, scan_out);
}

WrapperDesign design_wrapper(const ModuleSpec& m, int width) {
  if (width < 1) throw std::invalid_argument("wrapper width must be >= 1");

  WrapperDesign d;
  d.width = width;
  d.chain_scan.assign(width, 0);
  d.chain_in_cells.assign(width, 0);
  d.chain_out_cells.assign(width, 0);

  std::vector<int> scans = m.scan_lengths;
  std::stable_sort(scans.begin(), scans.end(), std::greater<int>());
  for (int len : scans) d.chain_scan[argmin(d.chain_scan)] += len;

  // Shift-in and shift-out paths share the scan flops but carry their
  // own terminal cells; bidirs add a cell to both.
  std::vector<std::int64_t> in_load = d.chain_scan;
  std::vector<std::int64_t> out_load = d.chain_scan;
  const int in_cells = m.inputs + m.bidirs;
  const int out_cells = m.outputs + m.bidirs;
  for (int c = 0; c < in_cells; ++c) {
    int j = argmin(in_load);
    ++in_load[j];
    ++d.chain_in_cells[j];
  }
  for (int c = 0; c < out_cells; ++c) {
    int j = argmin(out_load);
    ++out_load[j];
    ++d.chain_out_cells[j];
  }

  d.scan_in_max = *std::max_element(in_load.begin(), in_load.end());
  d.scan_out_max = *std::max_element(out_load.begin(), out_load.end());
  d.test_time = wrapper_cycles(d.scan_in_max, d.scan_out_max, m.patterns);
  return d;
}

std::int64_t test_time(const ModuleSpec& m, int width) {
  return design_wrapper(m, width).test_time;
}

int useful_width_limit(const ModuleSpec& m) {
  int limit = m.scan_chains() +
              std::max(m.inputs + m.bidirs, m.outputs + m.bidirs);
  return std::max(limit, 1);
}

std::optional<int> min_channels(const ModuleSpec& m, const AteSpec& ate) {
  int cap = std::min(ate.channels / 2, useful_width_limit(m));
  for (int w = 1; w <= cap; ++w) {
    if (test_time(m, w) <= ate.depth) return 2 * w;
  }
  return std::nullopt;
}

}  // namespace siteopt
