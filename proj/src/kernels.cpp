#include "convgp/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace convgp::kernels {

using nets::PaddingMode;
using nets::prev_index;

double kernel_angle(double kuu, double kvv, double kuv) {
  const double denom = std::sqrt(kuu * kvv);
  if (denom <= 0.0) throw ZeroVariancePosition("kernel_angle: zero-variance coordinate");
  return std::acos(std::clamp(kuv / denom, -1.0, 1.0));
}

double arc_cosine_g(double theta) { return std::sin(theta) + (M_PI - theta) * std::cos(theta); }

double relu_second_moment(double kuu, double kvv, double kuv) {
  if (kuu <= 0.0 || kvv <= 0.0) return 0.0;
  const double theta = kernel_angle(kuu, kvv, kuv);
  return std::sqrt(kuu * kvv) / (2.0 * M_PI) * arc_cosine_g(theta);
}

namespace {

// Reads a previous-layer grid value with causal zero padding.
inline double padded(const Eigen::VectorXd& v, int p) {
  return (p >= 0 && p < v.size()) ? v(p) : 0.0;
}

int next_dim(int prev_dim, int M, PaddingMode padding) {
  const int n = nets::conv_output_length(prev_dim, M, padding);
  if (n < 1) throw EmptyOutput("kernel recursion: valid mode exhausted the grid");
  return n;
}

}  // namespace

KernelMatrix k1_same_input(const inputs::InputSeries& x, int M, double sigma_w2,
                           PaddingMode padding) {
  const int d = x.length();
  const int n = next_dim(d, M, padding);
  Eigen::MatrixXd K(n, n);
  for (int t = 0; t < n; ++t) {
    for (int u = t; u < n; ++u) {
      double acc = 0.0;
      for (int j = 1; j <= M; ++j)
        acc += padded(x.values, prev_index(t, j, M, padding)) *
               padded(x.values, prev_index(u, j, M, padding));
      K(t, u) = sigma_w2 * acc;
      K(u, t) = K(t, u);
    }
  }
  KernelMatrix out;
  out.K = linalg::SymMatrix(K);
  out.layer = 1;
  out.method = KernelMethod::analytic;
  out.padding = padding;
  return out;
}

CrossKernel k1_cross(const inputs::InputSeries& x, const inputs::InputSeries& xprime, int M,
                     double sigma_w2, PaddingMode padding) {
  if (x.length() != xprime.length())
    throw LengthMismatch("k1_cross: inputs have different lengths");
  const int n = next_dim(x.length(), M, padding);
  CrossKernel out;
  out.padding = padding;
  out.pp = k1_same_input(x, M, sigma_w2, padding).K.mat();
  out.qq = k1_same_input(xprime, M, sigma_w2, padding).K.mat();
  out.pq.resize(n, n);
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      double acc = 0.0;
      for (int j = 1; j <= M; ++j)
        acc += padded(x.values, prev_index(t, j, M, padding)) *
               padded(xprime.values, prev_index(u, j, M, padding));
      out.pq(t, u) = sigma_w2 * acc;
    }
  return out;
}

namespace {

enum class NextKind { relu, linear };

KernelMatrix next_kernel(const KernelMatrix& Kprev, int M, double sigma_w2, NextKind kind) {
  const int prev_dim = Kprev.dim();
  const int n = next_dim(prev_dim, M, Kprev.padding);
  const auto& Kp = Kprev.K;
  Eigen::MatrixXd K(n, n);
  for (int t = 0; t < n; ++t) {
    for (int u = t; u < n; ++u) {
      double acc = 0.0;
      for (int j = 1; j <= M; ++j) {
        const int p = prev_index(t, j, M, Kprev.padding);
        const int q = prev_index(u, j, M, Kprev.padding);
        if (p < 0 || q < 0) continue;  // causal padding: z is exactly zero there
        if (kind == NextKind::linear) {
          acc += Kp(p, q);
        } else {
          if (Kprev.padding == PaddingMode::valid && (Kp(p, p) == 0.0 || Kp(q, q) == 0.0))
            throw ZeroVariancePosition("relu_next_kernel: zero-variance position in valid mode");
          acc += relu_second_moment(Kp(p, p), Kp(q, q), Kp(p, q));
        }
      }
      K(t, u) = sigma_w2 * acc;
      K(u, t) = K(t, u);
    }
  }
  KernelMatrix out;
  out.K = linalg::SymMatrix(K);
  out.layer = Kprev.layer + 1;
  out.method = Kprev.method;
  out.padding = Kprev.padding;
  return out;
}

}  // namespace

KernelMatrix relu_next_kernel(const KernelMatrix& Kprev, int M, double sigma_w2) {
  return next_kernel(Kprev, M, sigma_w2, NextKind::relu);
}

KernelMatrix linear_next_kernel(const KernelMatrix& Kprev, int M, double sigma_w2) {
  return next_kernel(Kprev, M, sigma_w2, NextKind::linear);
}

KernelMatrix analytic_kernel(const inputs::InputSeries& x, const nets::NetworkArch& arch) {
  if (arch.activation == nets::Activation::tanh_act)
    throw std::invalid_argument("analytic_kernel: no closed form for tanh, use mc_kernel");
  arch.validate(x.length());
  KernelMatrix K = k1_same_input(x, arch.filter_width, arch.sigma_w2, arch.padding);
  for (int l = 2; l <= arch.depth; ++l)
    K = arch.activation == nets::Activation::relu
            ? relu_next_kernel(K, arch.filter_width, arch.sigma_w2)
            : linear_next_kernel(K, arch.filter_width, arch.sigma_w2);
  return K;
}

KernelMatrix mc_kernel(const inputs::InputSeries& x, const nets::NetworkArch& arch, int layer,
                       int n_mc, linalg::RngStream& rng) {
  if (layer < 1 || layer > arch.depth)
    throw DimensionMismatch("mc_kernel: layer out of range");
  if (n_mc < 2) throw DimensionMismatch("mc_kernel: need n_mc >= 2");
  nets::NetworkArch chain = arch;
  chain.depth = layer;
  chain.readout = nets::ReadoutKind::last_position;
  chain.validate(x.length());

  if (layer == 1) {
    // z^0 is the input itself; the expectation is over nothing.
    KernelMatrix K = k1_same_input(x, arch.filter_width, arch.sigma_w2, arch.padding);
    K.method = KernelMethod::mc;
    K.se = Eigen::MatrixXd::Zero(K.dim(), K.dim());
    return K;
  }

  nets::NetworkArch prefix = chain;
  prefix.depth = layer - 1;
  const int M = arch.filter_width;
  int prev_dim = x.length();
  for (int l = 0; l < layer - 1; ++l) prev_dim = nets::conv_output_length(prev_dim, M, arch.padding);
  const int n = next_dim(prev_dim, M, arch.padding);

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n_mc; ++s) {
    const nets::WeightSample w = nets::WeightSample::sample_prior(prefix, x.length(), rng);
    const Eigen::VectorXd z = nets::forward(x.values, prefix, w).post.back();
    for (int t = 0; t < n; ++t) {
      for (int u = t; u < n; ++u) {
        double y = 0.0;
        for (int j = 1; j <= M; ++j)
          y += padded(z, prev_index(t, j, M, arch.padding)) *
               padded(z, prev_index(u, j, M, arch.padding));
        y *= arch.sigma_w2;
        sum(t, u) += y;
        sumsq(t, u) += y * y;
      }
    }
  }

  Eigen::MatrixXd K(n, n), se(n, n);
  for (int t = 0; t < n; ++t) {
    for (int u = t; u < n; ++u) {
      const double mean = sum(t, u) / n_mc;
      const double var = std::max(0.0, (sumsq(t, u) - n_mc * mean * mean) / (n_mc - 1));
      K(t, u) = K(u, t) = mean;
      se(t, u) = se(u, t) = std::sqrt(var / n_mc);
    }
  }
  KernelMatrix out;
  out.K = linalg::SymMatrix(K);
  out.layer = layer;
  out.method = KernelMethod::mc;
  out.padding = arch.padding;
  out.se = std::move(se);
  return out;
}

KernelMatrix mc_tanh_kernel(const inputs::InputSeries& x, const nets::NetworkArch& arch, int layer,
                            int n_mc, linalg::RngStream& rng) {
  nets::NetworkArch tanh_arch = arch;
  tanh_arch.activation = nets::Activation::tanh_act;
  return mc_kernel(x, tanh_arch, layer, n_mc, rng);
}

std::vector<FnnKernelPoint> fnn_relu_kernel(double theta, int depth, const FnnKernelParams& params) {
  std::vector<FnnKernelPoint> out;
  out.reserve(depth);
  double diag = 1.0;
  double off = std::cos(theta);
  for (int l = 1; l <= depth; ++l) {
    const double ang = kernel_angle(diag, diag, off);
    const double next_off = params.sigma_b2 + params.nu_w2 / (2.0 * M_PI) * diag * arc_cosine_g(ang);
    const double next_diag = params.sigma_b2 + params.nu_w2 / 2.0 * diag;
    diag = next_diag;
    off = next_off;
    out.push_back({l, off, diag, off / diag});
  }
  return out;
}

std::vector<AngularPoint> angular_kernel_curve(const std::vector<double>& theta1_grid, double theta2,
                                               int max_depth, int M, double sigma_w2) {
  std::vector<AngularPoint> out;
  const double nu_w2 = sigma_w2 * M;  // fully-connected comparison scale
  for (double theta1 : theta1_grid) {
    // conv: one receptive-field slot at theta1, the remaining M-1 at theta2,
    // all with unit layer-1 variance. One recursion step averages g over the
    // slots; after that a single implied angle remains.
    {
      double diag = 1.0, off = 0.0;
      for (int depth = 1; depth <= max_depth; ++depth) {
        if (depth == 1) {
          off = sigma_w2 / (2.0 * M_PI) * (arc_cosine_g(theta1) + (M - 1) * arc_cosine_g(theta2));
          diag = sigma_w2 / (2.0 * M_PI) * M * M_PI;
        } else {
          const double ang = kernel_angle(diag, diag, off);
          off = sigma_w2 / (2.0 * M_PI) * M * diag * arc_cosine_g(ang);
          diag = sigma_w2 / 2.0 * M * diag;
        }
        out.push_back({"conv", depth, theta1, theta2, off});
      }
    }
    for (const auto& p : fnn_relu_kernel(theta1, max_depth, {0.0, nu_w2}))
      out.push_back({"fnn", p.depth, theta1, theta2, p.value});
  }
  return out;
}

linalg::SymMatrix rbf_kernel(const std::vector<Eigen::VectorXd>& points, double lengthscale) {
  if (lengthscale <= 0.0) throw DimensionMismatch("rbf_kernel: lengthscale must be positive");
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd K(n, n);
  const double inv = 1.0 / (2.0 * lengthscale * lengthscale);
  for (int i = 0; i < n; ++i) {
    for (int k = i; k < n; ++k) {
      const double d2 = (points[i] - points[k]).squaredNorm();
      K(i, k) = K(k, i) = std::exp(-d2 * inv);
    }
  }
  return linalg::SymMatrix(K);
}

double readout_kernel(const CrossKernel& k1, double sigma_v2) {
  if (k1.pp.rows() != k1.qq.rows() || k1.pp.rows() != k1.pq.rows())
    throw LengthMismatch("readout_kernel: block dimensions differ");
  const int n1 = static_cast<int>(k1.pp.rows());
  double acc = 0.0;
  for (int i = 0; i < n1; ++i)
    acc += relu_second_moment(k1.pp(i, i), k1.qq(i, i), k1.pq(i, i));
  return sigma_v2 / n1 * acc;
}

Eigen::MatrixXd readout_gram(const std::vector<Eigen::VectorXd>& A,
                             const std::vector<Eigen::VectorXd>& B, int M, double sigma_w2,
                             double sigma_v2, PaddingMode padding) {
  Eigen::MatrixXd G(A.size(), B.size());
  for (std::size_t a = 0; a < A.size(); ++a) {
    for (std::size_t b = 0; b < B.size(); ++b) {
      inputs::InputSeries xa{A[a], inputs::InputLaw::iid_gaussian, ""};
      inputs::InputSeries xb{B[b], inputs::InputLaw::iid_gaussian, ""};
      G(a, b) = readout_kernel(k1_cross(xa, xb, M, sigma_w2, padding), sigma_v2);
    }
  }
  return G;
}

}  // namespace convgp::kernels
