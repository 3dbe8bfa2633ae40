#pragma once

#include <Eigen/Dense>
#include <functional>

#include "convgp/inputs.hpp"
#include "convgp/linalg.hpp"

namespace convgp::cltbound {

enum class BoundMode { layer1_conditional, iid };

// Evaluated right-hand side of the convex-set CLT bound, with the universal
// constant set to 1: bound_value = d^{1/4} * sum_i E|Sigma^-1 X_i|^3.
struct CltBoundReport {
  int d_sub = 0;
  int M = 0;
  double sum_third_moments = 0.0;
  double d_quarter_factor = 0.0;
  double bound_value = 0.0;
  BoundMode mode = BoundMode::layer1_conditional;
};

// Gauss-Hermite nodes/weights for weight exp(-x^2) via the Golub-Welsch
// tridiagonal eigenproblem.
void gauss_hermite(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

// E[f(g)] for standard normal g, 64-node Gauss-Hermite.
double gauss_hermite_expectation(const std::function<double(double)>& f);

// E|g|^3 for standard normal g (no hard-coded decimal).
double abs_gaussian_third_moment();

// Bound for the layer-1 convolutional sum conditional on the input, over the
// last d_sub output positions under causal padding. The summands are
// X_j = w_j * v_j with v_j the input taps, so
// E|Sigma^-1 X_j|^3 = sigma_w^3 E|g|^3 |Sigma^-1 v_j|^3.
CltBoundReport layer1_bound(const inputs::InputSeries& x, int M, double sigma_w2, int d_sub);

// Identically distributed specialization: d^{1/4} * third_moment / sqrt(M).
CltBoundReport iid_bound(int M, int d, double third_moment);

// Lower-bound surrogate for the convex-set discrepancy: the largest
// two-sample CDF gap over random half-spaces, thresholds swept over all
// pooled projection values.
double empirical_convex_discrepancy(const linalg::SampleSet& X, const linalg::SampleSet& Y,
                                    int n_halfspaces, linalg::RngStream& rng);

}  // namespace convgp::cltbound
