// Modular SOC description and tester parameters.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace siteopt {

// One embedded module, described by its test access needs: functional
// terminals, internal scan chains, and the pattern count of its test set.
struct ModuleSpec {
  std::string name;
  int inputs = 0;
  int outputs = 0;
  int bidirs = 0;
  std::vector<int> scan_lengths;
  int patterns = 1;

  int scan_chains() const { return static_cast<int>(scan_lengths.size()); }
  std::int64_t scan_flops() const;
  // Pattern volume proxy used for ordering: patterns * (flops + terminals).
  std::int64_t test_data_bits() const;

  bool operator==(const ModuleSpec&) const = default;
};

struct SocDescription {
  std::string name;
  std::vector<ModuleSpec> modules;

  const ModuleSpec* find(const std::string& module_name) const;

  bool operator==(const SocDescription&) const = default;
};

// Fixed tester resources and timing constants.
struct AteSpec {
  int channels = 2;               // total digital channels
  std::int64_t depth = 1;         // vector memory depth per channel
  double freq_hz = 5.0e6;
  double index_time_s = 0.7;      // prober step time between touchdowns
  double contact_time_s = 0.01;   // settle time after touchdown
};

class SocParseError : public std::runtime_error {
 public:
  SocParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

SocDescription parse_soc(std::istream& in);
SocDescription parse_soc(const std::string& text);
SocDescription load_soc_file(const std::string& path);

// Canonical textual form; parse_soc(render_soc(s)) == s.
std::string render_soc(const SocDescription& soc);

// Structural invariants for programmatically built objects.
// Throw std::invalid_argument on violation.
void check_soc(const SocDescription& soc);
void check_ate(const AteSpec& ate);

struct ModuleCheck {
  std::string module;
  bool fits = false;
  int k_min = 0;                 // 0 when the module cannot fit at all
  std::int64_t cycles_at_k_min = 0;
};

struct ValidationReport {
  bool feasible = false;         // every module fits individually
  std::vector<ModuleCheck> modules;
};

// Per-module fit check against the tester's depth and channel budget.
ValidationReport validate_soc(const SocDescription& soc, const AteSpec& ate);

}  // namespace siteopt
