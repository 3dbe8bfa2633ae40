#pragma once

#include <Eigen/Dense>

#include "convgp/kernels.hpp"
#include "convgp/linalg.hpp"

namespace convgp::gp {

struct PosteriorResult {
  Eigen::VectorXd mean;
  linalg::SymMatrix cov;
  double sigma_eps2 = 0.0;
  double jitter_used = 0.0;
  // Number of predictive variances that came out negative from round-off and
  // were clipped to zero.
  int clip_count = 0;
};

// Zero-mean GP prior draws with the given covariance.
linalg::SampleSet gp_prior_sample(const kernels::KernelMatrix& K, int n, linalg::RngStream& rng);

// Exact GP regression: mean = K_sx (K_xx + sigma_eps2 I)^-1 y and
// cov = K_ss - K_sx (K_xx + sigma_eps2 I)^-1 K_sx^T, both via Cholesky
// solves (never an explicit inverse). Negative predictive variances are
// clipped to zero and counted.
PosteriorResult gp_posterior(const linalg::SymMatrix& K_xx, const Eigen::MatrixXd& K_sx,
                             const linalg::SymMatrix& K_ss, const Eigen::VectorXd& y,
                             double sigma_eps2);

}  // namespace convgp::gp
