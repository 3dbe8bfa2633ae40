#include "convgp/nets.hpp"

#include <cmath>

#include "convgp/parallel.hpp"

namespace convgp::nets {

void NetworkArch::validate(int input_len) const {
  if (depth < 1 || filter_width < 1) throw DimensionMismatch("NetworkArch: depth and filter width must be >= 1");
  if (sigma_w2 < 0.0) throw DimensionMismatch("NetworkArch: sigma_w2 must be non-negative");
  if (padding == PaddingMode::valid && input_len - depth * (filter_width - 1) < 1)
    throw EmptyOutput("NetworkArch: valid padding consumes the whole input");
}

double apply_activation(Activation h, double x) {
  switch (h) {
    case Activation::linear: return x;
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh_act: return std::tanh(x);
  }
  return x;
}

double activation_grad(Activation h, double x) {
  switch (h) {
    case Activation::linear: return 1.0;
    case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
    case Activation::tanh_act: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

Eigen::VectorXd causal_conv(const Eigen::VectorXd& z, const Eigen::VectorXd& w, PaddingMode padding) {
  const int d = static_cast<int>(z.size());
  const int M = static_cast<int>(w.size());
  const int out_len = conv_output_length(d, M, padding);
  if (out_len < 1) throw EmptyOutput("causal_conv: valid mode needs input length >= filter width");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(out_len);
  for (int t = 0; t < out_len; ++t) {
    double acc = 0.0;
    for (int j = 1; j <= M; ++j) {
      const int p = prev_index(t, j, M, padding);
      if (p >= 0 && p < d) acc += w(j - 1) * z(p);
    }
    a(t) = acc;
  }
  return a;
}

WeightSample WeightSample::sample_prior(const NetworkArch& arch, int input_len, linalg::RngStream& rng) {
  arch.validate(input_len);
  WeightSample w;
  const double sd = std::sqrt(arch.sigma_w2);
  w.filters.reserve(arch.depth);
  for (int l = 0; l < arch.depth; ++l)
    w.filters.push_back(sd * rng.gaussian_vector(arch.filter_width));
  if (arch.readout == ReadoutKind::linear_readout) {
    int n_last = input_len;
    for (int l = 0; l < arch.depth; ++l)
      n_last = conv_output_length(n_last, arch.filter_width, arch.padding);
    w.readout = std::sqrt(arch.sigma_v2 / n_last) * rng.gaussian_vector(n_last);
  }
  return w;
}

ForwardResult forward(const Eigen::VectorXd& x, const NetworkArch& arch, const WeightSample& weights) {
  arch.validate(static_cast<int>(x.size()));
  ForwardResult r;
  r.pre.reserve(arch.depth);
  r.post.reserve(arch.depth);
  Eigen::VectorXd z = x;
  for (int l = 0; l < arch.depth; ++l) {
    Eigen::VectorXd a = causal_conv(z, weights.filters[l], arch.padding);
    z = a.unaryExpr([&](double v) { return apply_activation(arch.activation, v); });
    r.pre.push_back(std::move(a));
    r.post.push_back(z);
  }
  if (arch.readout == ReadoutKind::linear_readout) {
    if (weights.readout.size() != r.post.back().size())
      throw DimensionMismatch("forward: readout weight length does not match last layer width");
    r.output = weights.readout.dot(r.post.back());
  } else {
    r.output = r.pre.back()(r.pre.back().size() - 1);
  }
  return r;
}

linalg::SampleSet sample_cnn_prior(const inputs::InputSeries& x, const NetworkArch& arch, int n,
                                   linalg::RngStream& rng) {
  if (n < 2) throw DimensionMismatch("sample_cnn_prior: need n >= 2");
  arch.validate(x.length());
  int out_len = x.length();
  for (int l = 0; l < arch.depth; ++l)
    out_len = conv_output_length(out_len, arch.filter_width, arch.padding);
  linalg::SampleSet out;
  out.rows.resize(n, out_len);
  out.provenance = linalg::Provenance::cnn_prior;
  for (int i = 0; i < n; ++i) {
    const WeightSample w = WeightSample::sample_prior(arch, x.length(), rng);
    out.rows.row(i) = forward(x.values, arch, w).a_last().transpose();
  }
  return out;
}

Eigen::VectorXd flatten_weights(const WeightSample& w) {
  int total = 0;
  for (const auto& f : w.filters) total += static_cast<int>(f.size());
  total += static_cast<int>(w.readout.size());
  Eigen::VectorXd flat(total);
  int at = 0;
  for (const auto& f : w.filters) {
    flat.segment(at, f.size()) = f;
    at += static_cast<int>(f.size());
  }
  if (w.readout.size() > 0) flat.segment(at, w.readout.size()) = w.readout;
  return flat;
}

WeightSample unflatten_weights(const Eigen::VectorXd& flat, const NetworkArch& arch, int input_len) {
  WeightSample w;
  int at = 0;
  for (int l = 0; l < arch.depth; ++l) {
    w.filters.push_back(flat.segment(at, arch.filter_width));
    at += arch.filter_width;
  }
  if (arch.readout == ReadoutKind::linear_readout) {
    int n_last = input_len;
    for (int l = 0; l < arch.depth; ++l)
      n_last = conv_output_length(n_last, arch.filter_width, arch.padding);
    w.readout = flat.segment(at, n_last);
    at += n_last;
  }
  if (at != flat.size()) throw DimensionMismatch("unflatten_weights: size mismatch");
  return w;
}

double mse_loss(const inputs::WindowedDataset& data, const NetworkArch& arch, const WeightSample& w) {
  double acc = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    const double e = forward(data.windows[i], arch, w).output - data.targets(i);
    acc += e * e;
  }
  return acc / data.size();
}

namespace {

// Backward pass through one convolution layer: given d(loss)/d(a) for the
// layer output, accumulates the filter gradient and returns d(loss)/d(z) for
// the layer input.
Eigen::VectorXd conv_backward(const Eigen::VectorXd& z_in, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& da, PaddingMode padding, Eigen::VectorXd& dw) {
  const int d = static_cast<int>(z_in.size());
  const int M = static_cast<int>(w.size());
  Eigen::VectorXd dz = Eigen::VectorXd::Zero(d);
  for (int t = 0; t < da.size(); ++t) {
    for (int j = 1; j <= M; ++j) {
      const int p = prev_index(t, j, M, padding);
      if (p >= 0 && p < d) {
        dw(j - 1) += da(t) * z_in(p);
        dz(p) += da(t) * w(j - 1);
      }
    }
  }
  return dz;
}

}  // namespace

Eigen::VectorXd mse_gradient(const inputs::WindowedDataset& data, const NetworkArch& arch,
                             const WeightSample& w) {
  if (arch.readout != ReadoutKind::linear_readout)
    throw std::invalid_argument("mse_gradient: training requires a linear readout");
  if (data.size() == 0) throw DimensionMismatch("mse_gradient: empty dataset");

  std::vector<Eigen::VectorXd> dfilters;
  for (const auto& f : w.filters) dfilters.push_back(Eigen::VectorXd::Zero(f.size()));
  Eigen::VectorXd dreadout = Eigen::VectorXd::Zero(w.readout.size());

  const double inv_n = 1.0 / data.size();
  for (int i = 0; i < data.size(); ++i) {
    const ForwardResult fr = forward(data.windows[i], arch, w);
    const double dy = 2.0 * (fr.output - data.targets(i)) * inv_n;
    dreadout += dy * fr.post.back();
    Eigen::VectorXd dz = dy * w.readout;
    for (int l = arch.depth - 1; l >= 0; --l) {
      Eigen::VectorXd da(dz.size());
      for (int t = 0; t < dz.size(); ++t)
        da(t) = dz(t) * activation_grad(arch.activation, fr.pre[l](t));
      const Eigen::VectorXd& z_in = l == 0 ? data.windows[i] : fr.post[l - 1];
      dz = conv_backward(z_in, w.filters[l], da, arch.padding, dfilters[l]);
    }
  }

  WeightSample g;
  g.filters = std::move(dfilters);
  g.readout = std::move(dreadout);
  return flatten_weights(g);
}

WeightSample train_cnn(const inputs::WindowedDataset& data, const NetworkArch& arch,
                       const TrainHyper& hyper, linalg::RngStream& rng) {
  if (arch.readout != ReadoutKind::linear_readout)
    throw std::invalid_argument("train_cnn: training requires a linear readout");
  if (data.size() == 0) throw DimensionMismatch("train_cnn: empty dataset");
  const int W = static_cast<int>(data.windows.front().size());
  WeightSample w = WeightSample::sample_prior(arch, W, rng);
  Eigen::VectorXd flat = flatten_weights(w);
  for (int step = 0; step < hyper.steps; ++step) {
    const Eigen::VectorXd g = mse_gradient(data, arch, w);
    flat -= hyper.lr * g;
    w = unflatten_weights(flat, arch, W);
    if (!flat.allFinite())
      throw DivergedTraining("train_cnn: non-finite parameters at step " + std::to_string(step));
  }
  if (!std::isfinite(mse_loss(data, arch, w))) throw DivergedTraining("train_cnn: non-finite final loss");
  return w;
}

EnsembleStats ensemble_stats(const inputs::WindowedDataset& data, const inputs::WindowedDataset& test,
                             const NetworkArch& arch, const TrainHyper& hyper, int N,
                             linalg::RngStream& rng, int jobs) {
  if (N < 2) throw DimensionMismatch("ensemble_stats: need N >= 2");
  if (test.size() == 0) throw DimensionMismatch("ensemble_stats: empty test set");

  Eigen::MatrixXd preds(N, test.size());
  std::vector<std::string> failures(N);
  parallel::for_index(N, jobs, [&](int member) {
    try {
      linalg::RngStream member_rng = rng.derive(static_cast<std::uint64_t>(member));
      const WeightSample w = train_cnn(data, arch, hyper, member_rng);
      for (int i = 0; i < test.size(); ++i)
        preds(member, i) = forward(test.windows[i], arch, w).output;
    } catch (const std::exception& e) {
      failures[member] = e.what();
    }
  });
  for (const auto& f : failures)
    if (!f.empty()) throw DivergedTraining("ensemble_stats: member failed: " + f);

  EnsembleStats out;
  out.n_members = N;
  out.mean = preds.colwise().mean();
  out.variance.resize(test.size());
  for (int i = 0; i < test.size(); ++i) {
    const double m = out.mean(i);
    out.variance(i) = (preds.col(i).array() - m).square().sum() / (N - 1);
  }
  return out;
}

}  // namespace convgp::nets
