// Deterministic result rendering: text, CSV, JSON.
#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "siteopt/architecture.hpp"
#include "siteopt/soc_model.hpp"
#include "siteopt/throughput.hpp"

namespace siteopt {

inline constexpr const char* kToolVersion = "siteopt 1.0.0";

// Shortest decimal form that parses back to the same value.
std::string format_number(double v);
std::string format_number(std::int64_t v);

nlohmann::ordered_json soc_json(const SocDescription& soc);
nlohmann::ordered_json ate_json(const AteSpec& ate);
nlohmann::ordered_json params_json(const ThroughputParams& params);
nlohmann::ordered_json architecture_json(const Architecture& arch);
nlohmann::ordered_json plan_json(const SitePlan& plan);

std::string optimize_report_text(const SocDescription& soc, const AteSpec& ate,
                                 const ThroughputParams& params,
                                 const OptimizationResult& result);
std::string optimize_report_csv(const SocDescription& soc, const AteSpec& ate,
                                const ThroughputParams& params,
                                const OptimizationResult& result);
nlohmann::ordered_json optimize_report_json(const SocDescription& soc,
                                            const AteSpec& ate,
                                            const ThroughputParams& params,
                                            const OptimizationResult& result);

}  // namespace siteopt
