// geosim: run scenarios, compare reports, and solve tiny instances exactly.
#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>

#include "geolayer/oracle.hpp"
#include "geolayer/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"geo-distributed graph store simulator"};
  app.require_subcommand(1);

  std::string config;
  geolayer::RunOptions opts;

  CLI::App* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config, "scenario config file")->required();
  run->add_option("--out", opts.out_dir, "output directory (default $GEOSIM_OUT or ./out)");
  run->add_option("--strategy", opts.strategy, "override: geolayer | random3 | top3");
  run->add_flag("--dump-layers", opts.dump_layers, "write the layered graph dump");
  run->add_flag("--dump-heat", opts.dump_heat, "write a per-step heat trace");

  std::string dir_a, dir_b;
  CLI::App* cmp = app.add_subcommand("compare", "compare two report directories");
  cmp->add_option("a", dir_a, "baseline report directory")->required();
  cmp->add_option("b", dir_b, "report directory to normalize against a")->required();

  std::string oracle_config;
  std::string oracle_out;
  CLI::App* orc = app.add_subcommand("oracle", "exact solve of a tiny scenario");
  orc->add_option("config", oracle_config, "scenario config file")->required();
  orc->add_option("--out", oracle_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      geolayer::ScenarioResult r = geolayer::run_scenario(config, opts);
      std::cout << "strategy=" << r.strategy << " total_cost=" << r.cost.total
                << " mean_latency_ms=" << r.mean_latency_s * 1e3
                << " violations=" << r.latency_violations << "\n";
      for (const std::string& f : r.report_files) std::cout << "wrote " << f << "\n";
    } else if (cmp->parsed()) {
      std::cout << geolayer::compare_reports(dir_a, dir_b);
    } else if (orc->parsed()) {
      geolayer::RunOptions oopts;
      oopts.out_dir = oracle_out;
      oopts.force_oracle = true;
      geolayer::ScenarioResult r = geolayer::run_scenario(oracle_config, oopts);
      std::cout << "total_cost=" << r.cost.total;
      if (r.oracle_ran) std::cout << " gap_percent=" << r.gap_percent;
      std::cout << "\n";
    }
  } catch (const geolayer::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
