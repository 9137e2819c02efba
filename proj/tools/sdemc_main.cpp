#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdemc/sdemc.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "Experiment config (JSON)")
      ->required();
  sub->add_option("--seed", args.seed, "Override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  sub->add_option("--out", args.out_dir, "Override the output directory");
}

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const sdemc::config_error*>(&e)) return "config";
  if (dynamic_cast<const sdemc::contract_error*>(&e)) return "contract";
  if (dynamic_cast<const sdemc::budget_error*>(&e)) return "budget";
  if (dynamic_cast<const sdemc::degenerate_filter_error*>(&e)) return "degenerate_filter";
  if (dynamic_cast<const sdemc::ingest_error*>(&e)) return "ingest";
  if (dynamic_cast<const sdemc::unsupported_model_error*>(&e)) return "unsupported_model";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
  return "runtime";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretization-free Monte Carlo engine for EA1 diffusions"};
  app.require_subcommand(1);

  CommonArgs args;
  sdemc::Mode mode = sdemc::Mode::prior;

  auto* prior = app.add_subcommand("prior", "Simulate from the SDE prior");
  add_common(prior, args);
  prior->callback([&] { mode = sdemc::Mode::prior; });

  auto* posterior =
      app.add_subcommand("posterior", "Sample paths given noisy observations");
  add_common(posterior, args);
  posterior->callback([&] { mode = sdemc::Mode::posterior; });

  auto* params =
      app.add_subcommand("params", "Sample paths and the drift parameter");
  add_common(params, args);
  params->callback([&] { mode = sdemc::Mode::params; });

  auto* baseline = app.add_subcommand(
      "baseline", "Run a comparison algorithm (euler, pf, rwpf, pmcmc, pimh)");
  add_common(baseline, args);
  std::string algo;
  baseline->add_option("--algo", algo, "Override baseline.algo");
  baseline->callback([&] { mode = sdemc::Mode::baseline; });

  auto* bench = app.add_subcommand(
      "filter-bench", "Error-versus-budget filtering comparison");
  add_common(bench, args);
  bench->callback([&] { mode = sdemc::Mode::filter_bench; });

  auto* stocks =
      app.add_subcommand("stocks", "Fit the bundled stock-price series");
  add_common(stocks, args);
  stocks->callback([&] { mode = sdemc::Mode::stocks; });

  CLI11_PARSE(app, argc, argv);

  try {
    sdemc::ExperimentConfig cfg = sdemc::load_config(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (mode == sdemc::Mode::baseline && !algo.empty()) cfg.baseline_algo = algo;
    const auto summary = sdemc::run_experiment(mode, cfg);
    std::cout << summary.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"]["type"] = error_type(e);
    err["error"]["message"] = e.what();
    std::cout << err.dump(2) << '\n';
    return 1;
  }
}
