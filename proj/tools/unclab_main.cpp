#include <CLI11.hpp>
#include <cstdint>
#include <string>

#include "unclab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"unclab - uncertainty decomposition experiments"};
  app.set_version_flag("--version", unclab::kToolVersion);

  std::string config_path;
  app.add_option("--config", config_path, "experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);

  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");

  std::string out_dir;
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides config)");

  bool plot = false;
  app.add_flag("--plot", plot, "emit SVG charts alongside the CSV tables");

  int threads = -1;
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (0 = auto)")
                          ->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  unclab::RunOptions options;
  if (seed_opt->count() > 0) options.seed_override = seed;
  if (out_opt->count() > 0) options.out_override = out_dir;
  if (threads_opt->count() > 0) options.threads_override = threads;
  options.force_plot = plot;

  return unclab::run_experiment(config_path, options);
}
