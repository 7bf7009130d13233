#include "siteopt/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace siteopt {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // fold -0 into 0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_number(std::int64_t v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

const char* onoff(bool b) { return b ? "on" : "off"; }

void curve_row(std::ostringstream& out, const SitePlan& p, char sep) {
  out << p.sites << sep << p.arch.channels << sep << p.arch.tam_width() << sep
      << p.arch.test_cycles << sep << format_number(p.manuf_time_s) << sep
      << format_number(p.app_time_s) << sep << format_number(p.pass_contact)
      << sep << format_number(p.pass_manuf) << sep
      << format_number(p.devices_per_hour) << sep
      << format_number(p.unique_devices_per_hour) << sep
      << (p.retest_model_strained ? 1 : 0);
}

constexpr const char* kCurveColumns =
    "n,k,w_total,T,t_m,t_a,P_c,P_m,D_th,D_th_unique,retest_model_strained";

std::string curve_header(char sep) {
  std::string h = kCurveColumns;
  if (sep != ',')
    for (auto& c : h)
      if (c == ',') c = sep;
  return h;
}

}  // namespace

nlohmann::ordered_json soc_json(const SocDescription& soc) {
  return {{"name", soc.name},
          {"modules", static_cast<std::int64_t>(soc.modules.size())}};
}

nlohmann::ordered_json ate_json(const AteSpec& ate) {
  return {{"channels", ate.channels},
          {"depth", ate.depth},
          {"freq_hz", ate.freq_hz},
          {"index_time_s", ate.index_time_s},
          {"contact_time_s", ate.contact_time_s}};
}

nlohmann::ordered_json params_json(const ThroughputParams& params) {
  return {{"contact_yield", params.contact_yield},
          {"manufacturing_yield", params.manufacturing_yield},
          {"broadcast", params.broadcast},
          {"abort_on_fail", params.abort_on_fail},
          {"retest", params.retest}};
}

nlohmann::ordered_json architecture_json(const Architecture& arch) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& g : arch.groups)
    groups.push_back({{"width", g.width},
                      {"members", g.members},
                      {"depth", g.depth}});
  return {{"k", arch.channels},
          {"w_total", arch.tam_width()},
          {"erpct_expansion", 1},
          {"T", arch.test_cycles},
          {"groups", groups}};
}

nlohmann::ordered_json plan_json(const SitePlan& plan) {
  return {{"n", plan.sites},
          {"arch", architecture_json(plan.arch)},
          {"t_m", plan.manuf_time_s},
          {"t_a", plan.app_time_s},
          {"P_c", plan.pass_contact},
          {"P_m", plan.pass_manuf},
          {"D_th", plan.devices_per_hour},
          {"D_th_unique", plan.unique_devices_per_hour},
          {"retest_model_strained", plan.retest_model_strained}};
}

nlohmann::ordered_json optimize_report_json(const SocDescription& soc,
                                            const AteSpec& ate,
                                            const ThroughputParams& params,
                                            const OptimizationResult& result) {
  nlohmann::ordered_json curve = nlohmann::ordered_json::array();
  for (const auto& p : result.curve) curve.push_back(plan_json(p));
  return {{"tool", kToolVersion},
          {"soc", soc_json(soc)},
          {"ate", ate_json(ate)},
          {"params", params_json(params)},
          {"base", architecture_json(result.base)},
          {"n_max", result.n_max},
          {"n_opt", result.n_opt},
          {"curve", curve},
          {"best", plan_json(result.best())}};
}

std::string optimize_report_text(const SocDescription& soc, const AteSpec& ate,
                                 const ThroughputParams& params,
                                 const OptimizationResult& result) {
  std::ostringstream out;
  out << "# " << kToolVersion << "\n";
  out << "soc " << soc.name << " modules=" << soc.modules.size() << "\n";
  out << "ate channels=" << ate.channels << " depth=" << ate.depth
      << " freq_hz=" << format_number(ate.freq_hz)
      << " index_time_s=" << format_number(ate.index_time_s)
      << " contact_time_s=" << format_number(ate.contact_time_s) << "\n";
  out << "params contact_yield=" << format_number(params.contact_yield)
      << " manufacturing_yield=" << format_number(params.manufacturing_yield)
      << " broadcast=" << onoff(params.broadcast)
      << " abort_on_fail=" << onoff(params.abort_on_fail)
      << " retest=" << onoff(params.retest) << "\n\n";

  out << "base k=" << result.base.channels
      << " w_total=" << result.base.tam_width() << " erpct_expansion=1"
      << " T=" << result.base.test_cycles << "\n";
  for (std::size_t i = 0; i < result.base.groups.size(); ++i) {
    const auto& g = result.base.groups[i];
    out << "group " << i + 1 << " width=" << g.width << " depth=" << g.depth
        << " members=" << join(g.members, ',') << "\n";
  }
  out << "\nn_max=" << result.n_max << " n_opt=" << result.n_opt << "\n";
  out << "curve:\n" << curve_header(' ') << "\n";
  for (const auto& p : result.curve) {
    curve_row(out, p, ' ');
    out << "\n";
  }
  const SitePlan& b = result.best();
  out << "\nbest ";
  out << "n=" << b.sites << " k=" << b.arch.channels
      << " w_total=" << b.arch.tam_width() << " T=" << b.arch.test_cycles
      << " t_m=" << format_number(b.manuf_time_s)
      << " t_a=" << format_number(b.app_time_s)
      << " P_c=" << format_number(b.pass_contact)
      << " P_m=" << format_number(b.pass_manuf)
      << " D_th=" << format_number(b.devices_per_hour)
      << " D_th_unique=" << format_number(b.unique_devices_per_hour) << "\n";
  return out.str();
}

std::string optimize_report_csv(const SocDescription& soc, const AteSpec& ate,
                                const ThroughputParams& params,
                                const OptimizationResult& result) {
  std::ostringstream out;
  out << "# " << kToolVersion << "\n";
  out << "# soc=" << soc.name << " modules=" << soc.modules.size() << "\n";
  out << "# ate channels=" << ate.channels << " depth=" << ate.depth
      << " freq_hz=" << format_number(ate.freq_hz)
      << " index_time_s=" << format_number(ate.index_time_s)
      << " contact_time_s=" << format_number(ate.contact_time_s) << "\n";
  out << "# params contact_yield=" << format_number(params.contact_yield)
      << " manufacturing_yield=" << format_number(params.manufacturing_yield)
      << " broadcast=" << (params.broadcast ? 1 : 0)
      << " abort_on_fail=" << (params.abort_on_fail ? 1 : 0)
      << " retest=" << (params.retest ? 1 : 0) << "\n";
  out << "# base k=" << result.base.channels
      << " w_total=" << result.base.tam_width() << " erpct_expansion=1"
      << " T=" << result.base.test_cycles << "\n";
  for (std::size_t i = 0; i < result.base.groups.size(); ++i) {
    const auto& g = result.base.groups[i];
    out << "# group " << i + 1 << " width=" << g.width << " depth=" << g.depth
        << " members=" << join(g.members, '|') << "\n";
  }
  out << "# n_max=" << result.n_max << " n_opt=" << result.n_opt << "\n";
  out << kCurveColumns << "\n";
  for (const auto& p : result.curve) {
    curve_row(out, p, ',');
    out << "\n";
  }
  return out.str();
}

}  // namespace siteopt
