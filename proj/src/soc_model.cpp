#include "siteopt/soc_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "siteopt/wrapper.hpp"

namespace siteopt {

std::int64_t ModuleSpec::scan_flops() const {
  return std::accumulate(scan_lengths.begin(), scan_lengths.end(),
                         std::int64_t{0});
}

std::int64_t ModuleSpec::test_data_bits() const {
  return static_cast<std::int64_t>(patterns) *
         (scan_flops() + inputs + outputs + bidirs);
}

const ModuleSpec* SocDescription::find(const std::string& module_name) const {
  for (const auto& m : modules) {
    if (m.name == module_name) return &m;
  }
  return nullptr;
}

SocParseError::SocParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

std::string strip(const std::string& raw) {
  std::string s = raw;
  if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && is_space(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

int parse_count(const std::string& token, int line, const std::string& what,
                int min_value, int max_value = 1'000'000'000) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(),
                                   value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw SocParseError(line, what + " expects an integer, got '" + token + "'");
  if (value < min_value || value > max_value)
    throw SocParseError(line, what + " out of range: " + token);
  return value;
}

void check_module(const ModuleSpec& m, int line) {
  if (!valid_name(m.name))
    throw SocParseError(line, "invalid module name '" + m.name + "'");
  for (int len : m.scan_lengths) {
    if (len < 1)
      throw SocParseError(line, "module " + m.name +
                                    ": scan chain lengths must be positive");
  }
  if (m.patterns < 1)
    throw SocParseError(line, "module " + m.name + ": Patterns must be >= 1");
  if (m.inputs == 0 && m.outputs == 0 && m.bidirs == 0 &&
      m.scan_lengths.empty())
    throw SocParseError(line, "module " + m.name +
                                  " has no test access points");
}

}  // namespace

SocDescription parse_soc(std::istream& in) {
  enum class Expect { kSoc, kModule, kInputs, kOutputs, kBidirs, kScan, kPatterns };

  SocDescription soc;
  ModuleSpec cur;
  std::set<std::string> seen;
  Expect state = Expect::kSoc;
  std::string raw;
  int line = 0;
  int module_line = 0;

  auto expect_keyword = [&](const std::vector<std::string>& toks,
                            const char* keyword) {
    if (toks.empty() || toks[0] != keyword)
      throw SocParseError(line, std::string("expected '") + keyword +
                                    "', got '" + (toks.empty() ? "" : toks[0]) +
                                    "'");
  };

  while (std::getline(in, raw)) {
    ++line;
    std::string s = strip(raw);
    if (s.empty()) continue;
    auto toks = tokens_of(s);

    switch (state) {
      case Expect::kSoc: {
        expect_keyword(toks, "Soc");
        if (toks.size() != 2 || !valid_name(toks[1]))
          throw SocParseError(line, "Soc expects a single name");
        soc.name = toks[1];
        state = Expect::kModule;
        break;
      }
      case Expect::kModule: {
        expect_keyword(toks, "Module");
        if (toks.size() != 2 || !valid_name(toks[1]))
          throw SocParseError(line, "Module expects a single name");
        if (!seen.insert(toks[1]).second)
          throw SocParseError(line, "duplicate module name '" + toks[1] + "'");
        cur = ModuleSpec{};
        cur.name = toks[1];
        module_line = line;
        state = Expect::kInputs;
        break;
      }
      case Expect::kInputs: {
        expect_keyword(toks, "Inputs");
        if (toks.size() != 2)
          throw SocParseError(line, "Inputs expects a single integer");
        cur.inputs = parse_count(toks[1], line, "Inputs", 0);
        state = Expect::kOutputs;
        break;
      }
      case Expect::kOutputs: {
        expect_keyword(toks, "Outputs");
        if (toks.size() != 2)
          throw SocParseError(line, "Outputs expects a single integer");
        cur.outputs = parse_count(toks[1], line, "Outputs", 0);
        state = Expect::kBidirs;
        break;
      }
      case Expect::kBidirs: {
        expect_keyword(toks, "Bidirs");
        if (toks.size() != 2)
          throw SocParseError(line, "Bidirs expects a single integer");
        cur.bidirs = parse_count(toks[1], line, "Bidirs", 0);
        state = Expect::kScan;
        break;
      }
      case Expect::kScan: {
        expect_keyword(toks, "ScanChains");
        auto colon = std::find(toks.begin(), toks.end(), ":");
        if (toks.size() < 3 || colon != toks.begin() + 2)
          throw SocParseError(line,
                              "ScanChains expects '<count> : <lengths...>'");
        int count = parse_count(toks[1], line, "ScanChains count", 0);
        std::vector<int> lengths;
        for (auto it = colon + 1; it != toks.end(); ++it)
          lengths.push_back(parse_count(*it, line, "scan chain length", 1));
        if (static_cast<int>(lengths.size()) != count)
          throw SocParseError(
              line, "ScanChains declared " + std::to_string(count) +
                        " chain(s) but listed " +
                        std::to_string(lengths.size()) + " length(s)");
        cur.scan_lengths = std::move(lengths);
        state = Expect::kPatterns;
        break;
      }
      case Expect::kPatterns: {
        expect_keyword(toks, "Patterns");
        if (toks.size() != 2)
          throw SocParseError(line, "Patterns expects a single integer");
        cur.patterns = parse_count(toks[1], line, "Patterns", 1);
        check_module(cur, module_line);
        soc.modules.push_back(std::move(cur));
        state = Expect::kModule;
        break;
      }
    }
  }

  if (state == Expect::kSoc)
    throw SocParseError(line, "empty description, expected 'Soc <name>'");
  if (state != Expect::kModule)
    throw SocParseError(line, "unexpected end of file inside module '" +
                                  cur.name + "'");
  if (soc.modules.empty())
    throw SocParseError(line, "Soc '" + soc.name + "' declares no modules");
  return soc;
}

SocDescription parse_soc(const std::string& text) {
  std::istringstream in(text);
  return parse_soc(in);
}

SocDescription load_soc_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open SOC file: " + path);
  return parse_soc(in);
}

std::string render_soc(const SocDescription& soc) {
  std::ostringstream out;
  out << "Soc " << soc.name << "\n";
  for (const auto& m : soc.modules) {
    out << "Module " << m.name << "\n";
    out << "Inputs " << m.inputs << "\n";
    out << "Outputs " << m.outputs << "\n";
    out << "Bidirs " << m.bidirs << "\n";
    out << "ScanChains " << m.scan_chains() << " :";
    for (int len : m.scan_lengths) out << ' ' << len;
    out << "\n";
    out << "Patterns " << m.patterns << "\n";
  }
  return out.str();
}

void check_soc(const SocDescription& soc) {
  if (!valid_name(soc.name))
    throw std::invalid_argument("invalid SOC name '" + soc.name + "'");
  if (soc.modules.empty())
    throw std::invalid_argument("SOC '" + soc.name + "' has no modules");
  std::set<std::string> seen;
  for (const auto& m : soc.modules) {
    if (!valid_name(m.name))
      throw std::invalid_argument("invalid module name '" + m.name + "'");
    if (!seen.insert(m.name).second)
      throw std::invalid_argument("duplicate module name '" + m.name + "'");
    if (m.inputs < 0 || m.outputs < 0 || m.bidirs < 0)
      throw std::invalid_argument("module " + m.name +
                                  ": terminal counts must be >= 0");
    for (int len : m.scan_lengths)
      if (len < 1)
        throw std::invalid_argument("module " + m.name +
                                    ": scan chain lengths must be positive");
    if (m.patterns < 1)
      throw std::invalid_argument("module " + m.name + ": patterns must be >= 1");
    if (m.inputs == 0 && m.outputs == 0 && m.bidirs == 0 &&
        m.scan_lengths.empty())
      throw std::invalid_argument("module " + m.name +
                                  " has no test access points");
  }
}

void check_ate(const AteSpec& ate) {
  if (ate.channels < 2)
    throw std::invalid_argument("tester needs at least 2 channels");
  if (ate.depth < 1)
    throw std::invalid_argument("vector depth must be >= 1");
  if (!(ate.freq_hz > 0.0))
    throw std::invalid_argument("tester frequency must be positive");
  if (ate.index_time_s < 0.0 || ate.contact_time_s < 0.0)
    throw std::invalid_argument("times must be >= 0");
}

ValidationReport validate_soc(const SocDescription& soc, const AteSpec& ate) {
  check_soc(soc);
  check_ate(ate);
  ValidationReport report;
  report.feasible = true;
  for (const auto& m : soc.modules) {
    ModuleCheck check;
    check.module = m.name;
    if (auto k = min_channels(m, ate)) {
      check.fits = true;
      check.k_min = *k;
      check.cycles_at_k_min = test_time(m, *k / 2);
    } else {
      report.feasible = false;
    }
    report.modules.push_back(std::move(check));
  }
  return report;
}

}  // namespace siteopt
