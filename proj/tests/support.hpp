// Shared helpers for the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "siteopt/architecture.hpp"
#include "siteopt/soc_model.hpp"
#include "siteopt/throughput.hpp"
#include "siteopt/wrapper.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(SITEOPT_DATA_DIR) + "/" + name;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the installed CLI binary through the shell. stderr is dropped
// unless merge_stderr is set.
inline CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(SITEOPT_CLI_PATH) + " " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

inline bool near(double a, double b, double tol = 1e-9) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

inline std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

// Data rows of a CSV report: everything that is not a '#' comment or the
// header row.
inline std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  bool header_seen = false;
  for (const auto& line : lines_of(text)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rows.push_back(csv_fields(line));
  }
  return rows;
}

struct TinyCase {
  siteopt::SocDescription soc;
  siteopt::AteSpec ate;
};

// Random SOC small enough for the exhaustive reference.
inline TinyCase make_tiny_case(std::mt19937& rng) {
  using Dist = std::uniform_int_distribution<int>;
  TinyCase c;
  c.soc.name = "tiny";
  int module_count = Dist(1, 4)(rng);
  for (int m = 0; m < module_count; ++m) {
    siteopt::ModuleSpec mod;
    mod.name = "m" + std::to_string(m);
    int chains = Dist(0, 3)(rng);
    for (int i = 0; i < chains; ++i)
      mod.scan_lengths.push_back(Dist(1, 20)(rng));
    mod.inputs = Dist(0, 3)(rng);
    mod.outputs = Dist(0, 3)(rng);
    mod.bidirs = Dist(0, 1)(rng);
    if (chains == 0 && mod.inputs + mod.outputs + mod.bidirs == 0)
      mod.inputs = 1;
    mod.patterns = Dist(1, 20)(rng);
    c.soc.modules.push_back(std::move(mod));
  }
  static const int kChannelChoices[] = {4, 6, 8, 10, 12};
  c.ate.channels = kChannelChoices[Dist(0, 4)(rng)];
  c.ate.depth = Dist(40, 900)(rng);
  return c;
}

// Structural invariants every architecture must satisfy. When
// step1_exact is set, group depth must equal the sum of member times at
// the group width; after redistribution it may only be lower.
inline bool validate_architecture(const siteopt::Architecture& arch,
                                  const siteopt::SocDescription& soc,
                                  const siteopt::AteSpec& ate,
                                  bool step1_exact, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::set<std::string> seen;
  std::int64_t total_width = 0;
  std::int64_t max_depth = 0;
  for (const auto& g : arch.groups) {
    if (g.width < 2 || g.width % 2 != 0) return fail("group width not even");
    total_width += g.width;
    if (g.depth > ate.depth) return fail("group depth exceeds vector memory");
    if (g.members.empty()) return fail("empty group");
    long long wrap_sum = 0;
    for (const auto& name : g.members) {
      if (!seen.insert(name).second) return fail("module assigned twice");
      const auto* m = soc.find(name);
      if (!m) return fail("unknown module " + name);
      wrap_sum += siteopt::test_time(*m, g.width / 2);
    }
    if (step1_exact && g.depth != wrap_sum)
      return fail("group depth != sum of member times");
    if (!step1_exact && g.depth > wrap_sum)
      return fail("group depth above re-wrapped sum");
    max_depth = std::max(max_depth, g.depth);
  }
  if (seen.size() != soc.modules.size()) return fail("module missing");
  if (total_width != arch.channels) return fail("width sum != channels");
  if (arch.channels > ate.channels) return fail("channels over budget");
  if (arch.test_cycles != max_depth) return fail("test_cycles != max depth");
  return true;
}

// The throughput curve re-derived with plain library calls.
inline double straight_line_dth(int n, const siteopt::Architecture& arch,
                                const siteopt::AteSpec& ate,
                                const siteopt::ThroughputParams& p) {
  double t_m = static_cast<double>(arch.test_cycles) / ate.freq_hz;
  double pass_c =
      1.0 - std::pow(1.0 - std::pow(p.contact_yield, arch.channels), n);
  double pass_m = 1.0 - std::pow(1.0 - p.manufacturing_yield, n);
  double t_a = p.abort_on_fail ? ate.contact_time_s + pass_c * pass_m * t_m
                               : ate.contact_time_s + t_m;
  return 3600.0 * n / (ate.index_time_s + t_a);
}

}  // namespace testutil
