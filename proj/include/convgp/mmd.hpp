#pragma once

#include <optional>

#include "convgp/linalg.hpp"

namespace convgp::mmd {

struct MmdEstimate {
  double mmd2 = 0.0;  // unbiased estimate, may be negative
  double bandwidth = 0.0;
  int m = 0;  // |X|
  int n = 0;  // |Y|
  std::optional<double> p_value;
};

// Unbiased squared MMD with an RBF kernel k(a,b) = exp(-|a-b|^2 / (2 bw^2)):
// within-X and within-Y means over ordered distinct pairs minus twice the
// cross mean. Negative values are reported as-is.
MmdEstimate mmd2_unbiased(const linalg::SampleSet& X, const linalg::SampleSet& Y, double bandwidth);

// Label-permutation null calibration; p = (#{perm stat >= observed} + 1) / (n_perm + 1).
MmdEstimate mmd_permutation_test(const linalg::SampleSet& X, const linalg::SampleSet& Y,
                                 double bandwidth, int n_perm, linalg::RngStream& rng);

// Reference discrepancy between two GPs with RBF kernels of lengthscale
// sqrt(2) and 4*sqrt(2) on the integer grid 0..d-1, using the pooled median
// heuristic bandwidth.
MmdEstimate rbf_gp_baseline(int d, int n, linalg::RngStream& rng);

}  // namespace convgp::mmd
