// Wrapper chain construction for a single module at a given TAM width.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "siteopt/soc_model.hpp"

namespace siteopt {

struct WrapperDesign {
  int width = 1;                            // wrapper chain count
  std::vector<std::int64_t> chain_scan;     // scan flops per chain
  std::vector<int> chain_in_cells;
  std::vector<int> chain_out_cells;
  std::int64_t scan_in_max = 0;             // longest shift-in path
  std::int64_t scan_out_max = 0;            // longest shift-out path
  std::int64_t test_time = 0;               // cycles
};

// Cycles to apply p patterns through paths of the given lengths:
// (1 + max) * p + min.
std::int64_t wrapper_cycles(std::int64_t scan_in, std::int64_t scan_out,
                            std::int64_t patterns);

// Balanced wrapper: longest scan chains placed first, each onto the
// currently shortest wrapper chain; input cells then padded onto the
// shortest shift-in paths and output cells onto the shortest shift-out
// paths. Bidir terminals carry a cell on both sides.
WrapperDesign design_wrapper(const ModuleSpec& m, int width);

std::int64_t test_time(const ModuleSpec& m, int width);

// Widths past this cannot shorten the schedule further.
int useful_width_limit(const ModuleSpec& m);

// Smallest even channel count at which the module's test fits the
// tester's vector depth, or nullopt when no width up to the channel
// budget does.
std::optional<int> min_channels(const ModuleSpec& m, const AteSpec& ate);

}  // namespace siteopt
