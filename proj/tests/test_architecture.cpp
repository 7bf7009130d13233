#include <random>
#include <variant>

#include "doctest.h"
#include "support.hpp"

#include "siteopt/architecture.hpp"
#include "siteopt/wrapper.hpp"

using siteopt::Architecture;
using siteopt::AteSpec;
using siteopt::FitResult;
using siteopt::Infeasible;
using siteopt::ModuleSpec;
using siteopt::OptimizationResult;
using siteopt::SocDescription;
using siteopt::ThroughputParams;

namespace {

ModuleSpec make_module(std::string name, int inputs, int outputs, int bidirs,
                       std::vector<int> scans, int patterns) {
  ModuleSpec m;
  m.name = std::move(name);
  m.inputs = inputs;
  m.outputs = outputs;
  m.bidirs = bidirs;
  m.scan_lengths = std::move(scans);
  m.patterns = patterns;
  return m;
}

SocDescription pair_soc() {
  SocDescription soc;
  soc.name = "pair";
  soc.modules.push_back(make_module("A", 2, 2, 0, {8, 6, 4}, 10));
  soc.modules.push_back(make_module("B", 0, 0, 0, {5, 5}, 7));
  return soc;
}

AteSpec make_ate(int channels, std::int64_t depth) {
  AteSpec ate;
  ate.channels = channels;
  ate.depth = depth;
  return ate;
}

}  // namespace

TEST_CASE("fit shares one group when the memory allows it") {
  FitResult fit = fit_step1(pair_soc(), make_ate(8, 200));
  REQUIRE(std::holds_alternative<Architecture>(fit));
  const auto& arch = std::get<Architecture>(fit);
  CHECK(arch.channels == 4);
  CHECK(arch.test_cycles == 167);
  REQUIRE(arch.groups.size() == 1);
  CHECK(arch.groups[0].width == 4);
  CHECK(arch.groups[0].members == std::vector<std::string>{"A", "B"});
  CHECK(arch.groups[0].depth == 167);
}

TEST_CASE("fit opens a second group when that leaves more free memory") {
  FitResult fit = fit_step1(pair_soc(), make_ate(8, 150));
  REQUIRE(std::holds_alternative<Architecture>(fit));
  const auto& arch = std::get<Architecture>(fit);
  CHECK(arch.channels == 6);
  CHECK(arch.test_cycles == 120);
  REQUIRE(arch.groups.size() == 2);
  CHECK(arch.groups[0].width == 4);
  CHECK(arch.groups[0].members == std::vector<std::string>{"A"});
  CHECK(arch.groups[0].depth == 120);
  CHECK(arch.groups[1].width == 2);
  CHECK(arch.groups[1].members == std::vector<std::string>{"B"});
  CHECK(arch.groups[1].depth == 87);
}

TEST_CASE("fit widens a group when that leaves more free memory") {
  SocDescription soc;
  soc.name = "wide";
  soc.modules.push_back(make_module("X", 0, 0, 0, {5, 5, 5, 5}, 4));
  soc.modules.push_back(make_module("Y", 0, 0, 0, {5, 5, 5, 5}, 3));
  FitResult fit = fit_step1(soc, make_ate(12, 90));
  REQUIRE(std::holds_alternative<Architecture>(fit));
  const auto& arch = std::get<Architecture>(fit);
  CHECK(arch.channels == 8);
  CHECK(arch.test_cycles == 52);
  REQUIRE(arch.groups.size() == 1);
  CHECK(arch.groups[0].width == 8);
  CHECK(arch.groups[0].members == std::vector<std::string>{"X", "Y"});
}

TEST_CASE("fit of a single module stops at its minimal width") {
  SocDescription soc;
  soc.name = "solo";
  soc.modules.push_back(make_module("A", 2, 2, 0, {8, 6, 4}, 10));
  FitResult fit = fit_step1(soc, make_ate(8, 130));
  REQUIRE(std::holds_alternative<Architecture>(fit));
  const auto& arch = std::get<Architecture>(fit);
  CHECK(arch.channels == 4);
  CHECK(arch.test_cycles == 120);
}

TEST_CASE("fit reports infeasible SOCs") {
  SocDescription soc;
  soc.name = "solo";
  soc.modules.push_back(make_module("A", 2, 2, 0, {8, 6, 4}, 10));
  FitResult fit = fit_step1(soc, make_ate(8, 90));
  REQUIRE(std::holds_alternative<Infeasible>(fit));
  const auto& inf = std::get<Infeasible>(fit);
  CHECK(inf.message.find("the SOC cannot be tested on the target ATE") !=
        std::string::npos);
  CHECK(inf.message.find("A") != std::string::npos);
}

TEST_CASE("max_sites") {
  CHECK(siteopt::max_sites(28, 256, true) == 17);
  CHECK(siteopt::max_sites(12, 256, true) == 41);
  CHECK(siteopt::max_sites(4, 4, false) == 1);
  CHECK(siteopt::max_sites(4, 17, false) == 4);
  CHECK_THROWS_AS(siteopt::max_sites(8, 4, false), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::max_sites(3, 12, false), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::max_sites(0, 12, true), std::invalid_argument);
  CHECK_THROWS_AS(siteopt::max_sites(4, 1, false), std::invalid_argument);
}

TEST_CASE("site curve spends leftover channels on the deepest group") {
  SocDescription soc = pair_soc();
  AteSpec ate = make_ate(8, 200);
  ThroughputParams params;

  auto r = optimize_step2(soc, ate, params);
  REQUIRE(std::holds_alternative<OptimizationResult>(r));
  const auto& opt = std::get<OptimizationResult>(r);
  CHECK(opt.base.channels == 4);
  CHECK(opt.n_max == 2);
  CHECK(opt.n_opt == 2);
  REQUIRE(opt.curve.size() == 2);

  const auto* two = opt.plan_for(2);
  REQUIRE(two != nullptr);
  CHECK(two->arch.channels == 4);
  CHECK(two->arch.test_cycles == 167);

  // One site leaves four spare channels; two go to the lone group.
  const auto* one = opt.plan_for(1);
  REQUIRE(one != nullptr);
  CHECK(one->arch.channels == 6);
  CHECK(one->arch.test_cycles == 145);
}

TEST_CASE("broadcast sharing changes the spare-channel budget") {
  SocDescription soc = pair_soc();
  AteSpec ate = make_ate(12, 200);
  ThroughputParams params;
  params.broadcast = true;

  auto r = optimize_step2(soc, ate, params);
  REQUIRE(std::holds_alternative<OptimizationResult>(r));
  const auto& opt = std::get<OptimizationResult>(r);
  CHECK(opt.n_max == 5);
  CHECK(opt.plan_for(5)->arch.channels == 4);
  CHECK(opt.plan_for(4)->arch.channels == 4);
  CHECK(opt.plan_for(3)->arch.channels == 4);
  CHECK(opt.plan_for(2)->arch.channels == 6);
  CHECK(opt.plan_for(1)->arch.channels == 10);
  for (const auto& plan : opt.curve)
    CHECK(plan.arch.test_cycles <= opt.base.test_cycles);
}

TEST_CASE("optimize propagates infeasibility") {
  SocDescription soc = pair_soc();
  auto r = optimize_step2(soc, make_ate(8, 50), ThroughputParams{});
  REQUIRE(std::holds_alternative<Infeasible>(r));
}

TEST_CASE("curve matches a plain re-evaluation of the model") {
  SocDescription soc = pair_soc();
  AteSpec ate = make_ate(10, 200);
  ThroughputParams params;
  params.contact_yield = 0.999;
  params.manufacturing_yield = 0.8;
  params.abort_on_fail = true;

  auto r = optimize_step2(soc, ate, params);
  REQUIRE(std::holds_alternative<OptimizationResult>(r));
  const auto& opt = std::get<OptimizationResult>(r);
  for (const auto& plan : opt.curve) {
    double expect =
        testutil::straight_line_dth(plan.sites, plan.arch, ate, params);
    CHECK(testutil::near(plan.devices_per_hour, expect));
  }
}

TEST_CASE("random tiny cases keep the structural invariants") {
  std::mt19937 rng(77);
  int feasible = 0;
  for (int trial = 0; trial < 60; ++trial) {
    testutil::TinyCase c = testutil::make_tiny_case(rng);
    FitResult fit = fit_step1(c.soc, c.ate);
    const auto* arch = std::get_if<Architecture>(&fit);
    if (!arch) continue;
    ++feasible;
    std::string why;
    CHECK_MESSAGE(
        testutil::validate_architecture(*arch, c.soc, c.ate, true, &why), why);

    ThroughputParams params;
    params.contact_yield = 0.995;
    params.manufacturing_yield = 0.9;
    auto r = optimize_step2(c.soc, c.ate, params);
    REQUIRE(std::holds_alternative<OptimizationResult>(r));
    const auto& opt = std::get<OptimizationResult>(r);
    CHECK(opt.n_max >= 1);
    CHECK(opt.curve.size() == static_cast<std::size_t>(opt.n_max));
    for (const auto& plan : opt.curve) {
      CHECK_MESSAGE(testutil::validate_architecture(plan.arch, c.soc, c.ate,
                                                    false, &why),
                    why);
      CHECK(plan.arch.test_cycles <= opt.base.test_cycles);
      if (params.broadcast)
        CHECK((plan.sites + 1) * plan.arch.channels / 2 <= c.ate.channels);
      else
        CHECK(plan.sites * plan.arch.channels <= c.ate.channels);
    }
    const auto& best = opt.best();
    for (const auto& plan : opt.curve)
      CHECK(best.devices_per_hour >= plan.devices_per_hour);
  }
  CHECK(feasible >= 20);
}
