#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "convgp/errors.hpp"
#include "convgp/linalg.hpp"

namespace convgp::inputs {

enum class InputLaw { iid_gaussian, ar };

struct InputSeries {
  Eigen::VectorXd values;
  InputLaw law = InputLaw::iid_gaussian;
  std::string meta;

  int length() const { return static_cast<int>(values.size()); }
};

struct ArSpec {
  Eigen::VectorXd coeffs;   // phi_1..phi_p
  double noise_sd = 1.0;    // innovation standard deviation
  int burn_in = 1000;
};

struct WindowedDataset {
  std::vector<Eigen::VectorXd> windows;  // all length W
  Eigen::VectorXd targets;
  int horizon = 1;

  int size() const { return static_cast<int>(windows.size()); }
};

// True when all roots of 1 - phi_1 z - ... - phi_p z^p lie outside the unit
// circle (checked via the companion matrix spectral radius).
bool is_stationary(const Eigen::VectorXd& coeffs);

InputSeries gen_iid_gaussian(int d, linalg::RngStream& rng);

// Simulates burn_in + d steps of the AR recursion from a zero initial state
// with N(0, noise_sd^2) innovations and returns the last d values.
InputSeries gen_ar(const ArSpec& spec, int d, linalg::RngStream& rng);

// Sliding windows of length W; the target for the window ending at index t
// is the value at t + horizon.
WindowedDataset make_windows(const InputSeries& series, int W, int horizon);

// Single-column CSV with header `value`.
InputSeries load_series_csv(const std::string& path);

}  // namespace convgp::inputs
