#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "papr/harness.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_path;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file")
      ->required();
  cmd->add_option("--seed", args.seed, "master seed (overrides config)");
  cmd->add_option("--out", args.out_path, "output CSV path (default: stdout)");
  cmd->add_option("--workers", args.workers, "worker thread count")
      ->check(CLI::PositiveNumber);
}

int emit(const std::string& csv, const papr::ExperimentConfig& cfg,
         const CommonArgs& args) {
  std::string path = args.out_path.empty() ? cfg.out_path : args.out_path;
  if (path.empty()) {
    std::cout << csv;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return 1;
  }
  out << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAPR reduction experiments for OFDM/AFDM tone injection"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* ccdf = app.add_subcommand("ccdf", "PAPR CCDF curve");
  CLI::App* ser = app.add_subcommand("ser", "SER vs Es/N0 under a soft limiter");
  CLI::App* power = app.add_subcommand("power", "average transmit power increase");
  CLI::App* covcheck =
      app.add_subcommand("covcheck", "local-peak power covariance vs closed form");
  CLI::App* complexity =
      app.add_subcommand("complexity", "instrumented NWCS/iteration counters");
  for (CLI::App* cmd : {ccdf, ser, power, covcheck, complexity})
    add_common(cmd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    papr::ExperimentConfig cfg = papr::load_config(args.config_path);
    for (const CLI::App* cmd : {ccdf, ser, power, covcheck, complexity}) {
      if (cmd->parsed() && cmd->count("--seed") > 0) cfg.master_seed = args.seed;
    }
    std::string csv;
    if (ccdf->parsed()) csv = papr::cmd_ccdf(cfg, args.workers);
    else if (ser->parsed()) csv = papr::cmd_ser(cfg, args.workers);
    else if (power->parsed()) csv = papr::cmd_power(cfg, args.workers);
    else if (covcheck->parsed()) csv = papr::cmd_covcheck(cfg, args.workers);
    else csv = papr::cmd_complexity(cfg, args.workers);
    return emit(csv, cfg, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
