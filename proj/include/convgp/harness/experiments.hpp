#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "convgp/harness/config.hpp"

namespace convgp::harness {

struct RunOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path out_dir;
};

struct RunResult {
  std::filesystem::path csv_path;
  int cells_total = 0;
  int cells_failed = 0;
};

// Allowed config vocabularies, one per subcommand.
const std::vector<std::string>& prior_mmd_keys();
const std::vector<std::string>& posterior_keys();
const std::vector<std::string>& angular_keys();
const std::vector<std::string>& clt_keys();
const std::vector<std::string>& plot_keys();

// MMD grid between CNN prior samples and the matched GP prior, plus one RBF
// GP baseline row per seed. One row per grid cell; failures land in the
// `error` column without aborting the grid.
RunResult run_prior_mmd_grid(const Config& cfg, const RunOptions& opts);

// GP posterior vs trained-ensemble comparison on an AR(3) series.
RunResult run_posterior_compare(const Config& cfg, const RunOptions& opts);

// Depth evolution of the two-angle convolutional kernel and its
// fully-connected counterpart.
RunResult run_angular(const Config& cfg, const RunOptions& opts);

// Bound evaluations plus the half-space discrepancy surrogate.
RunResult run_clt(const Config& cfg, const RunOptions& opts);

// Renders an SVG from a CSV produced by the runners above.
RunResult run_plot(const Config& cfg, const RunOptions& opts);

}  // namespace convgp::harness
