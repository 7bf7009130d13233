#include <cstdlib>
#include <variant>

#include "doctest.h"
#include "support.hpp"

#include "siteopt/architecture.hpp"
#include "siteopt/commands.hpp"
#include "siteopt/report.hpp"

using siteopt::AteSpec;
using siteopt::ModuleSpec;
using siteopt::OptimizationResult;
using siteopt::SocDescription;
using siteopt::ThroughputParams;

namespace {

struct Fixture {
  SocDescription soc;
  AteSpec ate;
  ThroughputParams params;
  OptimizationResult opt;
};

Fixture make_fixture() {
  Fixture f;
  f.soc.name = "pair";
  ModuleSpec a;
  a.name = "A";
  a.inputs = 2;
  a.outputs = 2;
  a.scan_lengths = {8, 6, 4};
  a.patterns = 10;
  ModuleSpec b;
  b.name = "B";
  b.scan_lengths = {5, 5};
  b.patterns = 7;
  f.soc.modules = {a, b};
  f.ate.channels = 8;
  f.ate.depth = 200;
  f.params.contact_yield = 0.999;
  f.params.manufacturing_yield = 0.9;
  f.params.abort_on_fail = true;
  auto r = siteopt::optimize_step2(f.soc, f.ate, f.params);
  f.opt = std::get<OptimizationResult>(r);
  return f;
}

}  // namespace

TEST_CASE("format_number is compact and reparsable") {
  CHECK(siteopt::format_number(0.5) == "0.5");
  CHECK(siteopt::format_number(256.0) == "256");
  CHECK(siteopt::format_number(-0.0) == "0");
  CHECK(siteopt::format_number(std::int64_t{123456789}) == "123456789");
  for (double v : {1.0 / 3.0, 1e-9, 5e6, 3600.0 / 7.0, 0.99757}) {
    std::string s = siteopt::format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("json report structure") {
  Fixture f = make_fixture();
  auto j = siteopt::optimize_report_json(f.soc, f.ate, f.params, f.opt);
  CHECK(j["tool"] == siteopt::kToolVersion);
  CHECK(j["soc"]["name"] == "pair");
  CHECK(j["ate"]["channels"] == 8);
  CHECK(j["params"]["abort_on_fail"] == true);
  CHECK(j["base"]["k"] == 4);
  CHECK(j["base"]["erpct_expansion"] == 1);
  CHECK(j["base"]["T"] == 167);
  CHECK(j["base"]["groups"].size() == 1);
  CHECK(j["base"]["groups"][0]["members"] ==
        nlohmann::ordered_json::array({"A", "B"}));
  CHECK(j["n_max"] == 2);
  CHECK(j["curve"].size() == 2);
  CHECK(j["curve"][0]["n"] == 2);
  CHECK(j["best"]["n"] == j["n_opt"]);
}

TEST_CASE("csv and json carry identical numbers") {
  Fixture f = make_fixture();
  std::string csv = siteopt::optimize_report_csv(f.soc, f.ate, f.params, f.opt);
  auto j = siteopt::optimize_report_json(f.soc, f.ate, f.params, f.opt);

  auto rows = testutil::csv_rows(csv);
  REQUIRE(rows.size() == j["curve"].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto& plan = j["curve"][i];
    REQUIRE(row.size() == 11);
    CHECK(std::strtod(row[0].c_str(), nullptr) == plan["n"].get<double>());
    CHECK(std::strtod(row[1].c_str(), nullptr) ==
          plan["arch"]["k"].get<double>());
    CHECK(std::strtod(row[4].c_str(), nullptr) == plan["t_m"].get<double>());
    CHECK(std::strtod(row[5].c_str(), nullptr) == plan["t_a"].get<double>());
    CHECK(std::strtod(row[6].c_str(), nullptr) == plan["P_c"].get<double>());
    CHECK(std::strtod(row[7].c_str(), nullptr) == plan["P_m"].get<double>());
    CHECK(std::strtod(row[8].c_str(), nullptr) == plan["D_th"].get<double>());
    CHECK(std::strtod(row[9].c_str(), nullptr) ==
          plan["D_th_unique"].get<double>());
  }
}

TEST_CASE("text report names the essentials") {
  Fixture f = make_fixture();
  std::string text =
      siteopt::optimize_report_text(f.soc, f.ate, f.params, f.opt);
  CHECK(text.find("soc pair") != std::string::npos);
  CHECK(text.find("base k=4") != std::string::npos);
  CHECK(text.find("members=A,B") != std::string::npos);
  CHECK(text.find("n_max=2") != std::string::npos);
  CHECK(text.find("curve:") != std::string::npos);
  CHECK(text.find("best n=") != std::string::npos);
}

TEST_CASE("renders are byte-stable across runs") {
  Fixture f1 = make_fixture();
  Fixture f2 = make_fixture();
  CHECK(siteopt::optimize_report_text(f1.soc, f1.ate, f1.params, f1.opt) ==
        siteopt::optimize_report_text(f2.soc, f2.ate, f2.params, f2.opt));
  CHECK(siteopt::optimize_report_csv(f1.soc, f1.ate, f1.params, f1.opt) ==
        siteopt::optimize_report_csv(f2.soc, f2.ate, f2.params, f2.opt));
  CHECK(siteopt::optimize_report_json(f1.soc, f1.ate, f1.params, f1.opt) ==
        siteopt::optimize_report_json(f2.soc, f2.ate, f2.params, f2.opt));
}

TEST_CASE("depth suffixes") {
  CHECK(siteopt::parse_depth("48K") == 49152);
  CHECK(siteopt::parse_depth("2k") == 2048);
  CHECK(siteopt::parse_depth("1M") == 1048576);
  CHECK(siteopt::parse_depth("1.256M") == 1317011);
  CHECK(siteopt::parse_depth("64") == 64);
  CHECK(siteopt::parse_depth(" 96K ") == 98304);
  CHECK_THROWS_AS(siteopt::parse_depth("x"), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_depth(""), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_depth("-4"), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_depth("0.2"), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_depth("12G"), std::invalid_argument);

  CHECK(siteopt::parse_depth_list("48K,64,1M") ==
        std::vector<std::int64_t>{49152, 64, 1048576});
  CHECK_THROWS_AS(siteopt::parse_depth_list("48K,,64"), std::invalid_argument);
}

TEST_CASE("sweep specs") {
  siteopt::SweepSpec s = siteopt::parse_sweep_spec("channels:16:64:16");
  CHECK(s.param == siteopt::SweepParam::kChannels);
  CHECK(s.from == 16.0);
  CHECK(s.to == 64.0);
  CHECK(s.step == 16.0);

  s = siteopt::parse_sweep_spec("depth:48K:128K:8K");
  CHECK(s.param == siteopt::SweepParam::kDepth);
  CHECK(s.from == 49152.0);
  CHECK(s.to == 131072.0);
  CHECK(s.step == 8192.0);

  CHECK(siteopt::parse_sweep_spec("p_c:0.9:1:0.05").param ==
        siteopt::SweepParam::kContactYield);
  CHECK(siteopt::parse_sweep_spec("pc:0.9:1:0.05").param ==
        siteopt::SweepParam::kContactYield);
  CHECK(siteopt::parse_sweep_spec("pm:0.5:1:0.1").param ==
        siteopt::SweepParam::kManufYield);
  CHECK(siteopt::parse_sweep_spec("sites:1:9:1").param ==
        siteopt::SweepParam::kSites);

  CHECK_THROWS_AS(siteopt::parse_sweep_spec("bogus:1:2:1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_sweep_spec("channels:1:2"),
                  std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_sweep_spec("channels:2:1:1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_sweep_spec("channels:1:2:0"),
                  std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_sweep_spec("p_c:0:1:0.1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(siteopt::parse_sweep_spec("p_c:0.9:one:0.1"),
                  std::invalid_argument);
}
