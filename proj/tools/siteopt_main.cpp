#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "siteopt/commands.hpp"

namespace {

struct CliOptions {
  std::vector<std::string> socs;
  int channels = 0;
  std::string depth;
  double freq_hz = 5.0e6;
  double index_time_s = 0.7;
  double contact_time_s = 0.01;
  double pc = 1.0;
  double pm = 1.0;
  bool broadcast = false;
  bool abort_on_fail = false;
  bool retest = false;
  bool oracle = false;
  std::string format = "text";
  std::string sweep;
  std::string depths;
  std::string expected;
  double channel_block_cost = 8000.0;
  double memory_block_cost = 1500.0;
  double budget = 0.0;
};

void add_common(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--channels", o.channels, "ATE channel count")->required();
  cmd->add_option("--depth", o.depth,
                  "ATE vector depth (suffix K = 1024, M = 1024*1024)");
  cmd->add_option("--freq", o.freq_hz, "scan clock in Hz");
  cmd->add_option("--index-time", o.index_time_s,
                  "prober index time in seconds");
  cmd->add_option("--contact-time", o.contact_time_s,
                  "per-touchdown contact time in seconds");
  cmd->add_option("--pc", o.pc, "per-channel contact yield");
  cmd->add_option("--pm", o.pm, "manufacturing yield");
  cmd->add_flag("--broadcast", o.broadcast,
                "share each channel group between two sites");
  cmd->add_flag("--abort-on-fail", o.abort_on_fail,
                "stop a touchdown at the first failing site");
  cmd->add_flag("--retest", o.retest,
                "optimize unique devices per hour under contact retest");
  cmd->add_option("--format", o.format, "output format: text, csv or json");
}

siteopt::RunConfig make_config(const CliOptions& o, bool need_depth) {
  siteopt::RunConfig cfg;
  cfg.soc_paths = o.socs;
  cfg.ate.channels = o.channels;
  if (need_depth) {
    if (o.depth.empty())
      throw std::invalid_argument("--depth is required");
    cfg.ate.depth = siteopt::parse_depth(o.depth);
  }
  cfg.ate.freq_hz = o.freq_hz;
  cfg.ate.index_time_s = o.index_time_s;
  cfg.ate.contact_time_s = o.contact_time_s;
  cfg.params.contact_yield = o.pc;
  cfg.params.manufacturing_yield = o.pm;
  cfg.params.broadcast = o.broadcast;
  cfg.params.abort_on_fail = o.abort_on_fail;
  cfg.params.retest = o.retest;
  cfg.format = o.format;
  cfg.run_oracle = o.oracle;
  cfg.channel_block_cost = o.channel_block_cost;
  cfg.memory_block_cost = o.memory_block_cost;
  cfg.budget = o.budget;
  return cfg;
}

int emit(const siteopt::CommandResult& r) {
  if (!r.output.empty()) std::fputs(r.output.c_str(), stdout);
  if (!r.diagnostics.empty()) std::fputs(r.diagnostics.c_str(), stderr);
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-site wafer test planning for modular SOCs"};
  app.require_subcommand(1);

  CliOptions opt;

  CLI::App* optimize =
      app.add_subcommand("optimize", "design the TAM and pick the site count");
  optimize->add_option("soc", opt.socs, "SOC description file")
      ->required()
      ->expected(1);
  add_common(optimize, opt);
  optimize->add_flag("--oracle", opt.oracle,
                     "also run the exhaustive reference (tiny SOCs only)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "re-optimize across a parameter range");
  sweep->add_option("soc", opt.socs, "SOC description file")
      ->required()
      ->expected(1);
  add_common(sweep, opt);
  sweep->add_option("--sweep", opt.sweep, "param:from:to:step")->required();

  CLI::App* bench = app.add_subcommand(
      "bench-table", "tabulate TAM width and site ceiling per vector depth");
  bench->add_option("soc", opt.socs, "SOC description files")
      ->required()
      ->expected(-1);
  add_common(bench, opt);
  bench->add_option("--depths", opt.depths, "comma-separated vector depths")
      ->required();
  bench->add_option("--expected", opt.expected,
                    "CSV of depth,k,n_max reference rows");

  CLI::App* compare = app.add_subcommand(
      "compare-upgrades", "rank tester upgrades by throughput per currency");
  compare->add_option("soc", opt.socs, "SOC description file")
      ->required()
      ->expected(1);
  add_common(compare, opt);
  compare->add_option("--channel-block-cost", opt.channel_block_cost,
                      "cost of one 16-channel block");
  compare->add_option("--memory-upgrade-cost", opt.memory_block_cost,
                      "cost of doubling the memory behind 16 channels");
  compare->add_option("--budget", opt.budget, "upgrade budget")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return siteopt::kExitInputError;
  }

  try {
    if (optimize->parsed())
      return emit(siteopt::cmd_optimize(make_config(opt, true)));
    if (sweep->parsed()) {
      siteopt::RunConfig cfg = make_config(opt, true);
      cfg.sweep = siteopt::parse_sweep_spec(opt.sweep);
      return emit(siteopt::cmd_sweep(cfg));
    }
    if (bench->parsed()) {
      siteopt::RunConfig cfg = make_config(opt, false);
      cfg.ate.depth = 1;  // replaced per row
      cfg.depths = siteopt::parse_depth_list(opt.depths);
      cfg.expected_path = opt.expected;
      return emit(siteopt::cmd_bench_table(cfg));
    }
    if (compare->parsed())
      return emit(siteopt::cmd_compare_upgrades(make_config(opt, true)));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return siteopt::kExitInputError;
  }
  return siteopt::kExitInputError;
}
