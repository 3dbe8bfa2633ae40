#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "convgp/errors.hpp"
#include "convgp/inputs.hpp"
#include "convgp/linalg.hpp"
#include "convgp/nets.hpp"

namespace convgp::kernels {

enum class KernelMethod { analytic, mc };

// Covariance over the output positions of one layer for a single input.
// Position indexing mirrors the zero padding of the conv layers exactly, so
// the kernel and the network describe the same prior.
struct KernelMatrix {
  linalg::SymMatrix K;
  int layer = 1;
  KernelMethod method = KernelMethod::analytic;
  nets::PaddingMode padding = nets::PaddingMode::causal_same;
  Eigen::MatrixXd se;  // per-entry MC standard error; empty for analytic

  int dim() const { return K.dim(); }
};

// Layer-1 covariance blocks for a pair of inputs.
struct CrossKernel {
  Eigen::MatrixXd pp;  // cov(a(x), a(x))
  Eigen::MatrixXd qq;  // cov(a(x'), a(x'))
  Eigen::MatrixXd pq;  // cov(a(x), a(x'))
  nets::PaddingMode padding = nets::PaddingMode::causal_same;
};

// Angle between two jointly Gaussian coordinates with the cosine clamped to
// [-1, 1] against round-off at the endpoints.
double kernel_angle(double kuu, double kvv, double kuv);

// g(theta) = sin(theta) + (pi - theta) * cos(theta).
double arc_cosine_g(double theta);

// E[relu(u) relu(v)] for zero-mean jointly Gaussian (u, v):
// sqrt(kuu*kvv)/(2*pi) * g(theta). Zero when either variance is zero (the
// corresponding activation is almost surely zero).
double relu_second_moment(double kuu, double kvv, double kuv);

// K^1_{tu} = sigma_w^2 * sum_j x[prev(t,j)] x[prev(u,j)], out-of-range taps
// contributing zero under causal_same.
KernelMatrix k1_same_input(const inputs::InputSeries& x, int M, double sigma_w2,
                           nets::PaddingMode padding);

// Two-input extension: pq block is sigma_w^2 * sum_j x[prev(t,j)] x'[prev(u,j)].
CrossKernel k1_cross(const inputs::InputSeries& x, const inputs::InputSeries& xprime, int M,
                     double sigma_w2, nets::PaddingMode padding);

// One step of the ReLU covariance recursion. Padded positions contribute
// zero; in valid mode a referenced zero-variance diagonal raises
// ZeroVariancePosition (causal_same treats it as a zero contribution).
KernelMatrix relu_next_kernel(const KernelMatrix& Kprev, int M, double sigma_w2);

// Identity-activation counterpart: K^l_{tu} = sigma_w^2 sum_j K^{l-1}[prev(t,j), prev(u,j)].
KernelMatrix linear_next_kernel(const KernelMatrix& Kprev, int M, double sigma_w2);

// Iterated analytic recursion up to layer `arch.depth` (relu or linear only).
KernelMatrix analytic_kernel(const inputs::InputSeries& x, const nets::NetworkArch& arch);

// Monte Carlo estimate of the layer-l covariance: n_mc full weight draws are
// forwarded to z^{l-1} and the expectation in the layer recursion is
// replaced by the sample mean. Layer 1 needs no sampling and is exact.
KernelMatrix mc_kernel(const inputs::InputSeries& x, const nets::NetworkArch& arch, int layer,
                       int n_mc, linalg::RngStream& rng);

// mc_kernel with the activation forced to tanh.
KernelMatrix mc_tanh_kernel(const inputs::InputSeries& x, const nets::NetworkArch& arch, int layer,
                            int n_mc, linalg::RngStream& rng);

struct FnnKernelParams {
  double sigma_b2 = 0.0;
  double nu_w2 = 1.0;
};

struct FnnKernelPoint {
  int depth = 0;
  double value = 0.0;        // off-diagonal kernel entry
  double diag = 0.0;         // per-layer variance
  double correlation = 0.0;  // value / diag
};

// Depth-wise fully-connected ReLU kernel recursion starting from the
// unit-normalized layer-1 kernel (diag 1, off-diagonal cos theta).
std::vector<FnnKernelPoint> fnn_relu_kernel(double theta, int depth, const FnnKernelParams& params);

struct AngularPoint {
  std::string model;  // "conv" or "fnn"
  int depth = 0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double value = 0.0;
};

// Two-angle illustration of the convolutional averaging: the layer-2 kernel
// averages g over the two angles, deeper layers iterate on the implied
// angle. The fnn rows use nu_w2 = sigma_w2 * M and no averaging.
std::vector<AngularPoint> angular_kernel_curve(const std::vector<double>& theta1_grid, double theta2,
                                               int max_depth, int M = 2, double sigma_w2 = 0.8);

linalg::SymMatrix rbf_kernel(const std::vector<Eigen::VectorXd>& points, double lengthscale);

// Scalar GP kernel of a one-hidden-layer ReLU conv net with a linear
// readout: (sigma_v2 / N1) * sum_i E[z^1_i(x) z^1_i(x')].
double readout_kernel(const CrossKernel& k1, double sigma_v2);

// Gram matrix of readout_kernel over two window lists.
Eigen::MatrixXd readout_gram(const std::vector<Eigen::VectorXd>& A,
                             const std::vector<Eigen::VectorXd>& B, int M, double sigma_w2,
                             double sigma_v2, nets::PaddingMode padding);

}  // namespace convgp::kernels
