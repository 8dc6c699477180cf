#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <thread>

#include "ncjt/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-TRP downlink coordination simulator (DPS / F-NCJT / NF-NCJT)"};

  std::string config_path;
  std::string scheme;
  std::string seeds;
  std::string traffic_scope;
  std::string suite;
  int users_per_trp = 0;
  int max_coord = 0;
  int ttis = 0;
  double lambda = 0;
  ncjt::ExperimentOptions options;
  options.jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (options.jobs < 1) options.jobs = 1;

  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--scheme", scheme, "none | dps | fncjt | nfncjt");
  app.add_option("--users-per-trp", users_per_trp, "Users attached per TRP");
  app.add_option("--max-coord", max_coord, "Max TRPs per CoMP set");
  app.add_option("--seeds", seeds, "Comma-separated seed list, e.g. 1,2,3");
  app.add_option("--ttis", ttis, "Simulated TTIs per run");
  app.add_option("--lambda", lambda, "File arrival rate per second");
  app.add_option("--traffic-scope", traffic_scope,
                 "Arrival rate scope: network | per_trp | per_ue");
  app.add_option("--out", options.out_dir, "Output directory")
      ->default_val("out");
  app.add_option("--suite", suite, "Named experiment suite: paper");
  app.add_option("--jobs", options.jobs, "Parallel seed runs");
  app.add_flag("--dump-grids", options.dump_grids,
               "Write per-TTI schedule grids (debug)");
  app.add_flag("--dump-links", options.dump_links,
               "Write per-TTI link gain traces (debug)");
  app.add_flag("--dump-layout", options.dump_layout,
               "Write TRP layout CSV");
  app.add_flag("--self-check", options.self_check,
               "Re-run the first seed of each cell and verify bit-identical output");

  CLI11_PARSE(app, argc, argv);

  try {
    ncjt::RunConfig config;
    if (!config_path.empty()) {
      config = ncjt::parse_config_file(config_path);
    }
    // Flags override file values.
    if (app.count("--scheme")) config.scheme = ncjt::scheme_from_name(scheme);
    if (app.count("--users-per-trp")) config.users_per_trp = users_per_trp;
    if (app.count("--max-coord")) config.max_coord = max_coord;
    if (app.count("--seeds")) config.seeds = ncjt::parse_seed_list(seeds);
    if (app.count("--ttis")) config.ttis = ttis;
    if (app.count("--lambda")) config.lambda_per_s = lambda;
    if (app.count("--traffic-scope")) {
      config.traffic_scope = ncjt::traffic_scope_from_name(traffic_scope);
    }
    config.validate();

    if (!suite.empty()) {
      if (suite != "paper") {
        throw ncjt::ConfigError("unknown suite '" + suite +
                                "' (available: paper)");
      }
      return ncjt::run_paper_suite(config, options);
    }
    return ncjt::run_experiment(config, options);
  } catch (const ncjt::DeterminismError& e) {
    std::cerr << "determinism self-check failed: " << e.what() << "\n";
    return 3;
  } catch (const ncjt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
