// Exhaustive reference implementations for small instances. Slow by
// design; used to certify the heuristics in tests and via the CLI.
#pragma once

#include <cstdint>

#include "siteopt/architecture.hpp"
#include "siteopt/soc_model.hpp"

namespace siteopt::oracle {

inline constexpr int kMaxScanChains = 5;
inline constexpr int kMaxIoCells = 8;   // inputs + outputs + 2 * bidirs
inline constexpr int kMaxTamWidth = 6;
inline constexpr int kMaxModules = 4;
inline constexpr int kMaxChannels = 12;

// Exact minimum test time over every assignment of scan chains to w
// wrapper chains (IO cells spread optimally for each assignment).
// Throws std::domain_error beyond the caps above.
std::int64_t exhaustive_wrapper_time(const ModuleSpec& m, int width);

// Exact minimum-channel architecture: every partition of the modules
// into groups and every even width per group, minimizing channels and
// then test time. Groups come out in canonical order (width falling,
// then member names). Throws std::domain_error beyond the caps above.
FitResult brute_force_fit(const SocDescription& soc, const AteSpec& ate);

}  // namespace siteopt::oracle
