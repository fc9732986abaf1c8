#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "traindesign/experiments.hpp"
#include "traindesign/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Training design Monte Carlo experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment and write a CSV");
  std::string config_path;
  std::string experiment;
  std::string out_path;
  std::string gamma_grid;
  std::uint64_t seed = 0;
  int trials = 0;
  int threads = 0;
  run->add_option("--config", config_path,
                  "config file with 'key = value' lines ('#' comments)");
  run->add_option("--experiment", experiment,
                  "one of nmse, lopt, eq, zf, outage");
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
  auto* trials_opt = run->add_option("--trials", trials, "Monte Carlo trials");
  run->add_option("--out", out_path, "output CSV path")->required();
  auto* grid_opt = run->add_option(
      "--gamma-grid", gamma_grid, "comma-separated accuracy grid in dB");
  auto* threads_opt =
      run->add_option("--threads", threads, "worker threads for trials");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::map<std::string, std::string> file_kv;
    if (!config_path.empty()) {
      file_kv = traindesign::parse_config_file(config_path);
    }
    std::string name = experiment;
    if (name.empty()) {
      auto it = file_kv.find("experiment");
      if (it != file_kv.end()) name = it->second;
    }
    if (name.empty()) {
      throw traindesign::ConfigError(
          "no experiment selected; pass --experiment or put 'experiment = "
          "...' in the config file");
    }
    file_kv.erase("experiment");

    traindesign::ExperimentConfig cfg = traindesign::default_config(name);
    traindesign::apply_overrides(cfg, file_kv);
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (trials_opt->count() > 0) cfg.trials = trials;
    if (threads_opt->count() > 0) cfg.threads = threads;
    if (grid_opt->count() > 0) {
      traindesign::apply_overrides(cfg, {{"gamma_grid_db", gamma_grid}});
    }
    traindesign::validate_config(cfg);

    traindesign::ExperimentResult res = traindesign::run_experiment(cfg);
    traindesign::emit_csv(res.rows, out_path);
    return 0;
  } catch (const traindesign::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const traindesign::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const traindesign::RankError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
