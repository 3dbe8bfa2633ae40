#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "convgp/harness/experiments.hpp"
#include "convgp/parallel.hpp"

namespace {

struct SubArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 -> hardware concurrency
};

void add_common(CLI::App* sub, SubArgs& args) {
  sub->add_option("--config", args.config, "experiment config file")->required();
  sub->add_option("--out", args.out, "output directory")->required();
  sub->add_option("--seed", args.seed, "base seed");
  sub->add_option("--jobs", args.jobs, "worker threads (CONVGP_JOBS overrides)");
}

int resolve_jobs(int cli_jobs) {
  if (const char* env = std::getenv("CONVGP_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw convgp::ConfigError("CONVGP_JOBS is not an integer");
    }
  }
  return cli_jobs > 0 ? cli_jobs : convgp::parallel::default_jobs();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convgp: convolutional-network Gaussian-process experiment harness"};
  app.require_subcommand(1);

  SubArgs args;
  CLI::App* prior = app.add_subcommand("prior-mmd", "MMD grid between CNN and GP priors");
  CLI::App* posterior = app.add_subcommand("posterior", "GP posterior vs trained CNN ensemble");
  CLI::App* angular = app.add_subcommand("angular", "depth evolution of the two-angle kernel");
  CLI::App* clt = app.add_subcommand("clt-bound", "convex-set CLT bound evaluation");
  CLI::App* plot = app.add_subcommand("plot", "render an SVG from an experiment CSV");
  for (CLI::App* sub : {prior, posterior, angular, clt, plot}) add_common(sub, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    convgp::harness::RunOptions opts;
    opts.seed = args.seed;
    opts.jobs = resolve_jobs(args.jobs);
    opts.out_dir = args.out;

    convgp::harness::RunResult res;
    if (prior->parsed()) {
      const auto cfg = convgp::harness::Config::parse_file(args.config, convgp::harness::prior_mmd_keys());
      res = convgp::harness::run_prior_mmd_grid(cfg, opts);
    } else if (posterior->parsed()) {
      const auto cfg = convgp::harness::Config::parse_file(args.config, convgp::harness::posterior_keys());
      res = convgp::harness::run_posterior_compare(cfg, opts);
    } else if (angular->parsed()) {
      const auto cfg = convgp::harness::Config::parse_file(args.config, convgp::harness::angular_keys());
      res = convgp::harness::run_angular(cfg, opts);
    } else if (clt->parsed()) {
      const auto cfg = convgp::harness::Config::parse_file(args.config, convgp::harness::clt_keys());
      res = convgp::harness::run_clt(cfg, opts);
    } else {
      const auto cfg = convgp::harness::Config::parse_file(args.config, convgp::harness::plot_keys());
      res = convgp::harness::run_plot(cfg, opts);
    }

    std::cout << "wrote " << res.csv_path.string() << " (" << res.cells_total << " cells, "
              << res.cells_failed << " failed)\n";
    return res.cells_failed > 0 ? 3 : 0;
  } catch (const convgp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
