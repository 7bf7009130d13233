#include "siteopt/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "json.hpp"

#include "siteopt/architecture.hpp"
#include "siteopt/oracle.hpp"
#include "siteopt/report.hpp"

namespace siteopt {

namespace {

// Upgrades beyond this tester size are rejected rather than ground
// through an absurd site curve.
constexpr int kMaxTesterChannels = 65536;

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(what) + " expects a number, got '" +
                                s + "'");
  }
  if (pos != s.size())
    throw std::invalid_argument(std::string(what) + " expects a number, got '" +
                                s + "'");
  return v;
}

void check_format(const std::string& format) {
  if (format != "text" && format != "csv" && format != "json")
    throw std::invalid_argument("format must be text, csv or json");
}

void check_yields(const ThroughputParams& p) {
  if (!(p.contact_yield >= 0.0 && p.contact_yield <= 1.0))
    throw std::invalid_argument("contact yield must be in [0, 1]");
  if (!(p.manufacturing_yield >= 0.0 && p.manufacturing_yield <= 1.0))
    throw std::invalid_argument("manufacturing yield must be in [0, 1]");
}

SocDescription load_single(const RunConfig& cfg, const char* cmd) {
  if (cfg.soc_paths.size() != 1)
    throw std::invalid_argument(std::string(cmd) +
                                " expects exactly one SOC file");
  return load_soc_file(cfg.soc_paths[0]);
}

const char* param_name(SweepParam p) {
  switch (p) {
    case SweepParam::kChannels: return "channels";
    case SweepParam::kDepth: return "depth";
    case SweepParam::kContactYield: return "p_c";
    case SweepParam::kManufYield: return "p_m";
    case SweepParam::kSites: return "sites";
  }
  return "?";
}

double objective(const OptimizationResult& r, bool retest) {
  const SitePlan& b = r.best();
  return retest ? b.unique_devices_per_hour : b.devices_per_hour;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text) {
  auto parts = split(trim(text), ':');
  if (parts.size() != 4)
    throw std::invalid_argument("sweep spec must be <param:from:to:step>");
  SweepSpec spec;
  const std::string& name = parts[0];
  if (name == "channels") {
    spec.param = SweepParam::kChannels;
  } else if (name == "depth") {
    spec.param = SweepParam::kDepth;
  } else if (name == "p_c" || name == "pc") {
    spec.param = SweepParam::kContactYield;
  } else if (name == "p_m" || name == "pm") {
    spec.param = SweepParam::kManufYield;
  } else if (name == "sites") {
    spec.param = SweepParam::kSites;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + name +
                                "' (channels, depth, p_c, p_m, sites)");
  }
  if (spec.param == SweepParam::kDepth) {
    spec.from = static_cast<double>(parse_depth(parts[1]));
    spec.to = static_cast<double>(parse_depth(parts[2]));
    spec.step = static_cast<double>(parse_depth(parts[3]));
  } else {
    spec.from = parse_double(parts[1], "sweep from");
    spec.to = parse_double(parts[2], "sweep to");
    spec.step = parse_double(parts[3], "sweep step");
  }
  if (!(spec.step > 0.0))
    throw std::invalid_argument("sweep step must be positive");
  if (!(spec.from > 0.0))
    throw std::invalid_argument("sweep bounds must be positive");
  if (spec.from > spec.to)
    throw std::invalid_argument("sweep expects from <= to");
  return spec;
}

std::int64_t parse_depth(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty depth value");
  double mult = 1.0;
  char last = s.back();
  if (last == 'K' || last == 'k') {
    mult = 1024.0;
    s.pop_back();
  } else if (last == 'M' || last == 'm') {
    mult = 1024.0 * 1024.0;
    s.pop_back();
  }
  double v = parse_double(s, "depth") * mult;
  if (!(v >= 0.5) || v > 9.0e15)
    throw std::invalid_argument("depth out of range: " + text);
  std::int64_t r = std::llround(v);
  if (r < 1) throw std::invalid_argument("depth out of range: " + text);
  return r;
}

std::vector<std::int64_t> parse_depth_list(const std::string& text) {
  std::vector<std::int64_t> depths;
  for (const auto& part : split(text, ','))
    depths.push_back(parse_depth(part));
  return depths;
}

namespace {

nlohmann::ordered_json oracle_json_block(const FitResult& fit,
                                         int heuristic_k) {
  if (const auto* inf = std::get_if<Infeasible>(&fit))
    return {{"infeasible", true}, {"message", inf->message}};
  const auto& arch = std::get<Architecture>(fit);
  auto j = architecture_json(arch);
  j["heuristic_k"] = heuristic_k;
  j["k_match"] = heuristic_k == arch.channels;
  return j;
}

std::string oracle_text_block(const FitResult& fit, int heuristic_k,
                              const char* prefix) {
  std::ostringstream out;
  if (const auto* inf = std::get_if<Infeasible>(&fit)) {
    out << prefix << "oracle infeasible: " << inf->message << "\n";
    return out.str();
  }
  const auto& arch = std::get<Architecture>(fit);
  out << prefix << "oracle k=" << arch.channels << " T=" << arch.test_cycles
      << " heuristic_k=" << heuristic_k
      << " k_match=" << (heuristic_k == arch.channels ? "yes" : "no") << "\n";
  for (std::size_t i = 0; i < arch.groups.size(); ++i) {
    const auto& g = arch.groups[i];
    out << prefix << "oracle group " << i + 1 << " width=" << g.width
        << " depth=" << g.depth << " members=" << join(g.members, ',') << "\n";
  }
  return out.str();
}

}  // namespace

CommandResult cmd_optimize(const RunConfig& cfg) {
  CommandResult res;
  try {
    check_format(cfg.format);
    check_ate(cfg.ate);
    check_yields(cfg.params);
    SocDescription soc = load_single(cfg, "optimize");

    OptimizeResult r = optimize_step2(soc, cfg.ate, cfg.params);
    if (const auto* inf = std::get_if<Infeasible>(&r)) {
      res.exit_code = kExitInfeasible;
      res.diagnostics = inf->message + "\n";
      return res;
    }
    const auto& opt = std::get<OptimizationResult>(r);

    std::optional<FitResult> oracle_fit;
    if (cfg.run_oracle)
      oracle_fit = oracle::brute_force_fit(soc, cfg.ate);

    if (cfg.format == "json") {
      auto j = optimize_report_json(soc, cfg.ate, cfg.params, opt);
      if (oracle_fit)
        j["oracle"] = oracle_json_block(*oracle_fit, opt.base.channels);
      res.output = j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
      res.output = optimize_report_csv(soc, cfg.ate, cfg.params, opt);
      if (oracle_fit)
        res.output += oracle_text_block(*oracle_fit, opt.base.channels, "# ");
    } else {
      res.output = optimize_report_text(soc, cfg.ate, cfg.params, opt);
      if (oracle_fit)
        res.output += "\n" + oracle_text_block(*oracle_fit, opt.base.channels, "");
    }
  } catch (const std::exception& e) {
    res.exit_code = kExitInputError;
    res.diagnostics = std::string("error: ") + e.what() + "\n";
  }
  return res;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
  CommandResult res;
  try {
    if (!cfg.sweep)
      throw std::invalid_argument("sweep requires --sweep <param:from:to:step>");
    check_ate(cfg.ate);
    check_yields(cfg.params);
    SocDescription soc = load_single(cfg, "sweep");
    const SweepSpec& sp = *cfg.sweep;
    if (!(sp.step > 0.0))
      throw std::invalid_argument("sweep step must be positive");
    if (!(sp.from > 0.0))
      throw std::invalid_argument("sweep bounds must be positive");
    if (sp.from > sp.to)
      throw std::invalid_argument("sweep expects from <= to");

    std::vector<double> values;
    auto steps =
        static_cast<long long>(std::floor((sp.to - sp.from) / sp.step + 1e-9));
    for (long long i = 0; i <= steps; ++i) values.push_back(sp.from + i * sp.step);

    auto int_value = [](double v, const char* what) -> long long {
      long long r = std::llround(v);
      if (std::abs(v - static_cast<double>(r)) > 1e-6)
        throw std::invalid_argument(std::string(what) +
                                    " sweep values must be integers");
      return r;
    };
    auto clamp_probability = [](double v) {
      return (v > 1.0 && v < 1.0 + 1e-9) ? 1.0 : v;
    };

    std::ostringstream out;
    out << "# " << kToolVersion << "\n";
    out << "# sweep param=" << param_name(sp.param)
        << " from=" << format_number(sp.from) << " to=" << format_number(sp.to)
        << " step=" << format_number(sp.step) << "\n";
    out << "# soc=" << soc.name << " modules=" << soc.modules.size() << "\n";
    out << "# ate channels=" << cfg.ate.channels << " depth=" << cfg.ate.depth
        << " freq_hz=" << format_number(cfg.ate.freq_hz)
        << " index_time_s=" << format_number(cfg.ate.index_time_s)
        << " contact_time_s=" << format_number(cfg.ate.contact_time_s) << "\n";
    out << "# params contact_yield=" << format_number(cfg.params.contact_yield)
        << " manufacturing_yield="
        << format_number(cfg.params.manufacturing_yield)
        << " broadcast=" << (cfg.params.broadcast ? 1 : 0)
        << " abort_on_fail=" << (cfg.params.abort_on_fail ? 1 : 0)
        << " retest=" << (cfg.params.retest ? 1 : 0) << "\n";

    std::string header =
        "param,value,n,k,w_total,T,t_m,t_a,P_c,P_m,D_th,D_th_unique,"
        "retest_model_strained,n_max,n_opt";

    // Effective manufacturing-test time per site count, for yield sweeps
    // under abort-on-fail. The site curve's length is fixed by the
    // architecture, so the column set is stable across rows.
    const bool tm_eff = sp.param == SweepParam::kManufYield &&
                        cfg.params.abort_on_fail;
    int tm_eff_n = 0;
    if (tm_eff) {
      OptimizeResult probe = optimize_step2(soc, cfg.ate, cfg.params);
      if (const auto* inf = std::get_if<Infeasible>(&probe)) {
        res.exit_code = kExitInfeasible;
        res.diagnostics = inf->message + "\n";
        return res;
      }
      tm_eff_n = std::get<OptimizationResult>(probe).n_max;
      for (int j = 1; j <= tm_eff_n; ++j)
        header += ",tm_eff_n" + std::to_string(j);
    }
    out << header << "\n";

    auto plan_fields = [](std::ostringstream& o, const SitePlan& p) {
      o << p.sites << ',' << p.arch.channels << ',' << p.arch.tam_width() << ','
        << p.arch.test_cycles << ',' << format_number(p.manuf_time_s) << ','
        << format_number(p.app_time_s) << ','
        << format_number(p.pass_contact) << ',' << format_number(p.pass_manuf)
        << ',' << format_number(p.devices_per_hour) << ','
        << format_number(p.unique_devices_per_hour) << ','
        << (p.retest_model_strained ? 1 : 0);
    };

    int rows = 0;
    if (sp.param == SweepParam::kSites) {
      OptimizeResult r = optimize_step2(soc, cfg.ate, cfg.params);
      if (const auto* inf = std::get_if<Infeasible>(&r)) {
        res.exit_code = kExitInfeasible;
        res.diagnostics = inf->message + "\n";
        return res;
      }
      const auto& opt = std::get<OptimizationResult>(r);
      for (double v : values) {
        long long n = int_value(v, "sites");
        const SitePlan* plan = opt.plan_for(static_cast<int>(n));
        if (!plan) continue;
        out << "sites," << n << ',';
        plan_fields(out, *plan);
        out << ',' << opt.n_max << ',' << opt.n_opt << "\n";
        ++rows;
      }
      if (rows == 0) {
        res.exit_code = kExitInfeasible;
        res.diagnostics = "no feasible site count in sweep range\n";
        return res;
      }
    } else {
      for (double v : values) {
        AteSpec ate = cfg.ate;
        ThroughputParams params = cfg.params;
        switch (sp.param) {
          case SweepParam::kChannels:
            ate.channels = static_cast<int>(int_value(v, "channels"));
            break;
          case SweepParam::kDepth:
            ate.depth = int_value(v, "depth");
            break;
          case SweepParam::kContactYield:
            params.contact_yield = clamp_probability(v);
            break;
          case SweepParam::kManufYield:
            params.manufacturing_yield = clamp_probability(v);
            break;
          case SweepParam::kSites:
            break;
        }
        OptimizeResult r = optimize_step2(soc, ate, params);
        if (const auto* inf = std::get_if<Infeasible>(&r)) {
          res.exit_code = kExitInfeasible;
          res.diagnostics = inf->message + " (sweep " +
                            std::string(param_name(sp.param)) + "=" +
                            format_number(v) + ")\n";
          return res;
        }
        const auto& opt = std::get<OptimizationResult>(r);
        out << param_name(sp.param) << ',' << format_number(v) << ',';
        plan_fields(out, opt.best());
        out << ',' << opt.n_max << ',' << opt.n_opt;
        if (tm_eff) {
          for (int j = 1; j <= tm_eff_n; ++j) {
            const SitePlan* plan = opt.plan_for(j);
            double eff = plan ? plan->pass_contact * plan->pass_manuf *
                                    plan->manuf_time_s
                              : 0.0;
            out << ',' << format_number(eff);
          }
        }
        out << "\n";
        ++rows;
      }
    }
    res.output = out.str();
  } catch (const std::exception& e) {
    res.exit_code = kExitInputError;
    res.diagnostics = std::string("error: ") + e.what() + "\n";
  }
  return res;
}

namespace {

std::map<std::int64_t, std::pair<int, int>> parse_expected_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expected file: " + path);
  std::map<std::int64_t, std::pair<int, int>> expected;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string s = raw;
    if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    auto parts = split(s, ',');
    if (parts.size() != 3)
      throw std::invalid_argument("expected file line " +
                                  std::to_string(line_no) +
                                  ": want <depth>,<k>,<n_max>");
    if (trim(parts[0]) == "depth") continue;  // header row
    std::int64_t depth = parse_depth(parts[0]);
    int k = static_cast<int>(parse_double(trim(parts[1]), "expected k"));
    int n = static_cast<int>(parse_double(trim(parts[2]), "expected n_max"));
    expected[depth] = {k, n};
  }
  return expected;
}

struct BenchRow {
  std::string soc;
  std::int64_t depth = 0;
  std::optional<int> k;
  std::optional<int> n_max;
  std::optional<int> expected_k;
  std::optional<int> expected_n_max;
};

}  // namespace

CommandResult cmd_bench_table(const RunConfig& cfg) {
  CommandResult res;
  try {
    check_format(cfg.format);
    check_ate(cfg.ate);
    if (cfg.soc_paths.empty())
      throw std::invalid_argument("bench-table expects at least one SOC file");
    if (cfg.depths.empty())
      throw std::invalid_argument("bench-table expects a non-empty depth list");

    std::map<std::int64_t, std::pair<int, int>> expected;
    const bool with_expected = !cfg.expected_path.empty();
    if (with_expected) expected = parse_expected_file(cfg.expected_path);

    std::vector<BenchRow> rows;
    for (const auto& path : cfg.soc_paths) {
      SocDescription soc = load_soc_file(path);
      for (std::int64_t depth : cfg.depths) {
        AteSpec ate = cfg.ate;
        ate.depth = depth;
        BenchRow row;
        row.soc = soc.name;
        row.depth = depth;
        FitResult fit = fit_step1(soc, ate);
        if (const auto* arch = std::get_if<Architecture>(&fit)) {
          row.k = arch->channels;
          row.n_max = max_sites(arch->channels, ate.channels, true);
        }
        if (auto it = expected.find(depth); it != expected.end()) {
          row.expected_k = it->second.first;
          row.expected_n_max = it->second.second;
        }
        rows.push_back(std::move(row));
      }
    }

    auto cell = [](const std::optional<int>& v) {
      return v ? std::to_string(*v) : std::string();
    };
    auto diff_cell = [](const BenchRow& r) {
      if (r.k && r.expected_k) return std::to_string(*r.k - *r.expected_k);
      return std::string();
    };

    if (cfg.format == "json") {
      nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json j{{"soc", r.soc}, {"depth", r.depth}};
        j["k"] = r.k ? nlohmann::ordered_json(*r.k) : nullptr;
        j["n_max"] = r.n_max ? nlohmann::ordered_json(*r.n_max) : nullptr;
        if (with_expected) {
          j["expected_k"] =
              r.expected_k ? nlohmann::ordered_json(*r.expected_k) : nullptr;
          j["expected_n_max"] = r.expected_n_max
                                    ? nlohmann::ordered_json(*r.expected_n_max)
                                    : nullptr;
          j["k_diff"] = (r.k && r.expected_k)
                            ? nlohmann::ordered_json(*r.k - *r.expected_k)
                            : nullptr;
        }
        jrows.push_back(std::move(j));
      }
      nlohmann::ordered_json j{{"tool", kToolVersion},
                               {"channels", cfg.ate.channels},
                               {"broadcast", true},
                               {"step1_only", true},
                               {"rows", jrows}};
      res.output = j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
      std::ostringstream out;
      out << "# " << kToolVersion << "\n";
      out << "# bench channels=" << cfg.ate.channels
          << " broadcast=1 step1_only=1\n";
      out << "soc,depth,k,n_max";
      if (with_expected) out << ",expected_k,expected_n_max,k_diff";
      out << "\n";
      for (const auto& r : rows) {
        out << r.soc << ',' << r.depth << ',' << cell(r.k) << ','
            << cell(r.n_max);
        if (with_expected)
          out << ',' << cell(r.expected_k) << ',' << cell(r.expected_n_max)
              << ',' << diff_cell(r);
        out << "\n";
      }
      res.output = out.str();
    } else {
      std::ostringstream out;
      out << "# " << kToolVersion << "\n";
      out << "bench channels=" << cfg.ate.channels
          << " broadcast=on step1-only\n";
      out << std::left << std::setw(16) << "soc" << std::right << std::setw(10)
          << "depth" << std::setw(6) << "k" << std::setw(7) << "n_max";
      if (with_expected)
        out << std::setw(8) << "exp_k" << std::setw(10) << "exp_n_max"
            << std::setw(8) << "k_diff";
      out << "\n";
      for (const auto& r : rows) {
        auto dash = [](const std::string& s) { return s.empty() ? "-" : s; };
        out << std::left << std::setw(16) << r.soc << std::right
            << std::setw(10) << r.depth << std::setw(6) << dash(cell(r.k))
            << std::setw(7) << dash(cell(r.n_max));
        if (with_expected)
          out << std::setw(8) << dash(cell(r.expected_k)) << std::setw(10)
              << dash(cell(r.expected_n_max)) << std::setw(8)
              << dash(diff_cell(r));
        out << "\n";
      }
      res.output = out.str();
    }
  } catch (const std::exception& e) {
    res.exit_code = kExitInputError;
    res.diagnostics = std::string("error: ") + e.what() + "\n";
  }
  return res;
}

namespace {

struct Scenario {
  std::string name;
  double spend = 0.0;
  double throughput = 0.0;
  double delta = 0.0;
  double per_currency = 0.0;
  // memory-scenario extras
  bool has_fraction = false;
  double fraction = 0.0;
  double full_cost = 0.0;
  double full_throughput = 0.0;
  double full_delta = 0.0;
  double full_per_currency = 0.0;
};

}  // namespace

CommandResult cmd_compare_upgrades(const RunConfig& cfg) {
  CommandResult res;
  try {
    check_format(cfg.format);
    check_ate(cfg.ate);
    check_yields(cfg.params);
    if (cfg.budget < 0.0)
      throw std::invalid_argument("budget must be >= 0");
    if (!(cfg.channel_block_cost > 0.0) || !(cfg.memory_block_cost > 0.0))
      throw std::invalid_argument("upgrade costs must be positive");
    SocDescription soc = load_single(cfg, "compare-upgrades");

    auto run = [&](const AteSpec& ate) -> std::variant<double, Infeasible> {
      OptimizeResult r = optimize_step2(soc, ate, cfg.params);
      if (const auto* inf = std::get_if<Infeasible>(&r)) return *inf;
      return objective(std::get<OptimizationResult>(r), cfg.params.retest);
    };

    OptimizeResult base_r = optimize_step2(soc, cfg.ate, cfg.params);
    if (const auto* inf = std::get_if<Infeasible>(&base_r)) {
      res.exit_code = kExitInfeasible;
      res.diagnostics = inf->message + "\n";
      return res;
    }
    const auto& base = std::get<OptimizationResult>(base_r);
    const double v0 = objective(base, cfg.params.retest);

    // More channels, same depth.
    auto blocks = static_cast<long long>(
        std::floor(cfg.budget / cfg.channel_block_cost + 1e-9));
    AteSpec ate_ch = cfg.ate;
    if (cfg.ate.channels + 16.0 * static_cast<double>(blocks) >
        kMaxTesterChannels)
      throw std::invalid_argument(
          "channel upgrade exceeds the supported tester size");
    ate_ch.channels += static_cast<int>(16 * blocks);
    auto v_ch_r = run(ate_ch);
    // Extra channels cannot remove feasibility the baseline had.
    const double v_ch = std::get<double>(v_ch_r);

    Scenario ch;
    ch.name = "add-channels";
    ch.spend = static_cast<double>(blocks) * cfg.channel_block_cost;
    ch.throughput = v_ch;
    ch.delta = v_ch - v0;
    ch.per_currency = ch.spend > 0.0 ? ch.delta / ch.spend : 0.0;

    // Doubled depth; counts only when the whole tester is upgraded.
    long long need = (cfg.ate.channels + 15) / 16;
    auto afford = static_cast<long long>(
        std::floor(cfg.budget / cfg.memory_block_cost + 1e-9));
    AteSpec ate_mem = cfg.ate;
    ate_mem.depth *= 2;
    auto v_mem_r = run(ate_mem);
    const double v_mem = std::get<double>(v_mem_r);

    Scenario mem;
    mem.name = "double-memory";
    mem.has_fraction = true;
    mem.full_cost = static_cast<double>(need) * cfg.memory_block_cost;
    mem.full_throughput = v_mem;
    mem.full_delta = v_mem - v0;
    mem.full_per_currency = mem.full_delta / mem.full_cost;
    if (afford >= need) {
      mem.fraction = 1.0;
      mem.spend = mem.full_cost;
      mem.throughput = v_mem;
      mem.delta = mem.full_delta;
      mem.per_currency = mem.full_per_currency;
    } else {
      mem.fraction = static_cast<double>(afford) / static_cast<double>(need);
      mem.spend = 0.0;
      mem.throughput = v0;
      mem.delta = 0.0;
      mem.per_currency = 0.0;
    }

    std::string preferred = "none";
    {
      const Scenario* pick = nullptr;
      for (const Scenario* s : {&ch, &mem}) {
        if (s->delta <= 0.0) continue;
        if (!pick || s->per_currency > pick->per_currency ||
            (s->per_currency == pick->per_currency && s->delta > pick->delta))
          pick = s;
      }
      if (pick) preferred = pick->name;
    }

    Scenario baseline;
    baseline.name = "baseline";
    baseline.throughput = v0;

    if (cfg.format == "json") {
      auto scenario_json = [](const Scenario& s) {
        nlohmann::ordered_json j{{"name", s.name},
                                 {"spend", s.spend},
                                 {"throughput", s.throughput},
                                 {"delta", s.delta},
                                 {"delta_per_currency", s.per_currency}};
        if (s.has_fraction) {
          j["affordable_fraction"] = s.fraction;
          j["full_cost"] = s.full_cost;
          j["full_throughput"] = s.full_throughput;
          j["full_delta"] = s.full_delta;
          j["full_delta_per_currency"] = s.full_per_currency;
        }
        return j;
      };
      nlohmann::ordered_json j{
          {"tool", kToolVersion},
          {"soc", soc_json(soc)},
          {"ate", ate_json(cfg.ate)},
          {"params", params_json(cfg.params)},
          {"budget", cfg.budget},
          {"channel_block_cost", cfg.channel_block_cost},
          {"memory_block_cost", cfg.memory_block_cost},
          {"baseline",
           {{"throughput", v0},
            {"n_opt", base.n_opt},
            {"k", base.base.channels},
            {"T", base.base.test_cycles}}},
          {"scenarios",
           nlohmann::ordered_json::array(
               {scenario_json(ch), scenario_json(mem)})},
          {"preferred", preferred}};
      res.output = j.dump(2) + "\n";
    } else if (cfg.format == "csv") {
      std::ostringstream out;
      out << "# " << kToolVersion << "\n";
      out << "# compare soc=" << soc.name << " channels=" << cfg.ate.channels
          << " depth=" << cfg.ate.depth
          << " budget=" << format_number(cfg.budget)
          << " channel_block_cost=" << format_number(cfg.channel_block_cost)
          << " memory_block_cost=" << format_number(cfg.memory_block_cost)
          << "\n";
      out << "# baseline throughput=" << format_number(v0)
          << " n_opt=" << base.n_opt << " k=" << base.base.channels
          << " T=" << base.base.test_cycles << "\n";
      out << "scenario,spend,throughput,delta,delta_per_currency,"
             "affordable_fraction,full_cost,full_throughput,full_delta,"
             "full_delta_per_currency\n";
      auto row = [&out](const Scenario& s) {
        out << s.name << ',' << format_number(s.spend) << ','
            << format_number(s.throughput) << ',' << format_number(s.delta)
            << ',' << format_number(s.per_currency) << ',';
        if (s.has_fraction)
          out << format_number(s.fraction) << ','
              << format_number(s.full_cost) << ','
              << format_number(s.full_throughput) << ','
              << format_number(s.full_delta) << ','
              << format_number(s.full_per_currency);
        else
          out << ",,,,";
        out << "\n";
      };
      row(baseline);
      row(ch);
      row(mem);
      out << "# preferred=" << preferred << "\n";
      res.output = out.str();
    } else {
      std::ostringstream out;
      out << "# " << kToolVersion << "\n";
      out << "soc " << soc.name << " channels=" << cfg.ate.channels
          << " depth=" << cfg.ate.depth << "\n";
      out << "budget " << format_number(cfg.budget)
          << " channel_block_cost=" << format_number(cfg.channel_block_cost)
          << " memory_block_cost=" << format_number(cfg.memory_block_cost)
          << "\n\n";
      out << "baseline throughput=" << format_number(v0)
          << " n_opt=" << base.n_opt << " k=" << base.base.channels
          << " T=" << base.base.test_cycles << "\n";
      out << "add-channels blocks=" << blocks
          << " channels=" << ate_ch.channels
          << " spend=" << format_number(ch.spend)
          << " throughput=" << format_number(ch.throughput)
          << " delta=" << format_number(ch.delta)
          << " delta_per_currency=" << format_number(ch.per_currency) << "\n";
      out << "double-memory affordable_fraction=" << format_number(mem.fraction)
          << " spend=" << format_number(mem.spend)
          << " throughput=" << format_number(mem.throughput)
          << " delta=" << format_number(mem.delta)
          << " delta_per_currency=" << format_number(mem.per_currency) << "\n";
      out << "double-memory-full cost=" << format_number(mem.full_cost)
          << " throughput=" << format_number(mem.full_throughput)
          << " delta=" << format_number(mem.full_delta)
          << " delta_per_currency=" << format_number(mem.full_per_currency)
          << "\n";
      out << "preferred " << preferred << "\n";
      res.output = out.str();
    }
  } catch (const std::exception& e) {
    res.exit_code = kExitInputError;
    res.diagnostics = std::string("error: ") + e.what() + "\n";
  }
  return res;
}

}  // namespace siteopt
