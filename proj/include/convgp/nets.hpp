#pragma once

#include <Eigen/Dense>
#include <vector>

#include "convgp/errors.hpp"
#include "convgp/inputs.hpp"
#include "convgp/linalg.hpp"

namespace convgp::nets {

enum class Activation { linear, relu, tanh_act };
enum class PaddingMode { causal_same, valid };
enum class ReadoutKind { last_position, linear_readout };

// Architecture of a 1-D convolutional stack: L layers of width-M filters,
// no biases, the same activation between layers. Weight variance sigma_w2 is
// used as-is (callers scale by 1/M themselves when they want that
// normalization).
struct NetworkArch {
  int depth = 1;
  int filter_width = 2;
  double sigma_w2 = 1.0;
  Activation activation = Activation::relu;
  PaddingMode padding = PaddingMode::causal_same;
  ReadoutKind readout = ReadoutKind::last_position;
  double sigma_v2 = 1.0;  // linear readout weight variance (before 1/N_1 scaling)

  void validate(int input_len) const;
};

// Output index t of a convolution layer reads previous-layer index
// prev_index(t, j) for filter taps j = 1..M. Under causal_same the output
// grid equals the input grid and negative indices are zero padding; under
// valid every tap is in range and the grid shrinks by M-1.
inline int prev_index(int t, int j, int M, PaddingMode padding) {
  return padding == PaddingMode::causal_same ? t - j : t + M - j;
}

inline int conv_output_length(int input_len, int M, PaddingMode padding) {
  return padding == PaddingMode::causal_same ? input_len : input_len - M + 1;
}

double apply_activation(Activation h, double x);
double activation_grad(Activation h, double x);

// a_t = sum_j w_j * z[prev(t, j)], taps outside the input contributing zero
// under causal_same. Throws EmptyOutput when valid mode has no fully covered
// position.
Eigen::VectorXd causal_conv(const Eigen::VectorXd& z, const Eigen::VectorXd& w,
                            PaddingMode padding = PaddingMode::causal_same);

struct WeightSample {
  std::vector<Eigen::VectorXd> filters;  // one length-M filter per layer
  Eigen::VectorXd readout;               // empty unless linear_readout

  static WeightSample sample_prior(const NetworkArch& arch, int input_len, linalg::RngStream& rng);
};

struct ForwardResult {
  std::vector<Eigen::VectorXd> pre;   // a^1..a^L
  std::vector<Eigen::VectorXd> post;  // z^1..z^L
  double output = 0.0;                // readout value

  const Eigen::VectorXd& a_last() const { return pre.back(); }
};

ForwardResult forward(const Eigen::VectorXd& x, const NetworkArch& arch, const WeightSample& weights);

// n independent weight draws forwarded on the same input; rows are the
// pre-activation vectors a^L.
linalg::SampleSet sample_cnn_prior(const inputs::InputSeries& x, const NetworkArch& arch, int n,
                                   linalg::RngStream& rng);

struct TrainHyper {
  double lr = 1e-2;
  int steps = 2000;
};

// Full-batch gradient descent on the mean squared error from a
// prior-initialized weight sample. Gradients come from reverse accumulation
// through conv, activation and readout. Throws DivergedTraining when the
// loss stops being finite.
WeightSample train_cnn(const inputs::WindowedDataset& data, const NetworkArch& arch,
                       const TrainHyper& hyper, linalg::RngStream& rng);

double mse_loss(const inputs::WindowedDataset& data, const NetworkArch& arch, const WeightSample& w);

// Gradient of the full-batch MSE with respect to all parameters, flattened
// as (filters layer 1..L, readout).
Eigen::VectorXd mse_gradient(const inputs::WindowedDataset& data, const NetworkArch& arch,
                             const WeightSample& w);

Eigen::VectorXd flatten_weights(const WeightSample& w);
WeightSample unflatten_weights(const Eigen::VectorXd& flat, const NetworkArch& arch, int input_len);

struct EnsembleStats {
  Eigen::VectorXd mean;      // per test input
  Eigen::VectorXd variance;  // unbiased, per test input
  int n_members = 0;
};

// Trains N independently initialized networks and reports the prediction
// mean and unbiased variance per test input. A diverging member aborts the
// whole call (the caller records the cell as failed).
EnsembleStats ensemble_stats(const inputs::WindowedDataset& data, const inputs::WindowedDataset& test,
                             const NetworkArch& arch, const TrainHyper& hyper, int N,
                             linalg::RngStream& rng, int jobs = 1);

}  // namespace convgp::nets
