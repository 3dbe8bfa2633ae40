#include "convgp/cltbound.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

namespace convgp::cltbound {

void gauss_hermite(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  nodes = solver.eigenvalues();
  weights.resize(n);
  const double total = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    weights(i) = total * v0 * v0;
  }
}

double gauss_hermite_expectation(const std::function<double(double)>& f) {
  static thread_local Eigen::VectorXd nodes, weights;
  if (nodes.size() == 0) gauss_hermite(64, nodes, weights);
  double acc = 0.0;
  for (int i = 0; i < nodes.size(); ++i) acc += weights(i) * f(std::sqrt(2.0) * nodes(i));
  return acc / std::sqrt(M_PI);
}

double abs_gaussian_third_moment() {
  return gauss_hermite_expectation([](double g) { return std::abs(g) * g * g; });
}

CltBoundReport layer1_bound(const inputs::InputSeries& x, int M, double sigma_w2, int d_sub) {
  if (d_sub < 1 || M < 1) throw DimensionMismatch("layer1_bound: need d_sub >= 1 and M >= 1");
  if (d_sub > M)
    throw SingularCovariance("layer1_bound: d_sub > M forces a rank-deficient covariance");
  const int d = x.length();
  if (d_sub > d) throw DimensionMismatch("layer1_bound: d_sub exceeds input length");
  if (sigma_w2 <= 0.0) throw DimensionMismatch("layer1_bound: sigma_w2 must be positive");

  // Taps feeding the last d_sub causal output positions.
  std::vector<Eigen::VectorXd> taps(M);
  for (int j = 1; j <= M; ++j) {
    Eigen::VectorXd v(d_sub);
    for (int r = 0; r < d_sub; ++r) {
      const int p = (d - d_sub + r) - j;
      v(r) = p >= 0 ? x.values(p) : 0.0;
    }
    taps[j - 1] = v;
  }

  Eigen::MatrixXd sigma2 = Eigen::MatrixXd::Zero(d_sub, d_sub);
  for (const auto& v : taps) sigma2 += sigma_w2 * v * v.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma2);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double lmax = lambda.maxCoeff();
  const double lmin = lambda.minCoeff();
  if (lmin <= 0.0 || lmax / lmin > 1e12)
    throw SingularCovariance("layer1_bound: covariance singular or ill-conditioned");

  const double eg3 = abs_gaussian_third_moment();
  const double sigma_w3 = std::pow(sigma_w2, 1.5);
  double sum = 0.0;
  for (const auto& v : taps) {
    // |Sigma^-1 v|^2 = v^T (Sigma^2)^-1 v through the eigenbasis.
    const Eigen::VectorXd proj = eig.eigenvectors().transpose() * v;
    const double norm2 = (proj.array().square() / lambda.array()).sum();
    sum += sigma_w3 * eg3 * std::pow(norm2, 1.5);
  }

  CltBoundReport out;
  out.d_sub = d_sub;
  out.M = M;
  out.sum_third_moments = sum;
  out.d_quarter_factor = std::pow(static_cast<double>(d_sub), 0.25);
  out.bound_value = out.d_quarter_factor * out.sum_third_moments;
  out.mode = BoundMode::layer1_conditional;
  return out;
}

CltBoundReport iid_bound(int M, int d, double third_moment) {
  if (M < 1 || d < 1) throw DimensionMismatch("iid_bound: need M >= 1 and d >= 1");
  if (third_moment <= 0.0) throw DimensionMismatch("iid_bound: third moment must be positive");
  CltBoundReport out;
  out.d_sub = d;
  out.M = M;
  out.sum_third_moments = third_moment / std::sqrt(static_cast<double>(M));
  out.d_quarter_factor = std::pow(static_cast<double>(d), 0.25);
  out.bound_value = out.d_quarter_factor * out.sum_third_moments;
  out.mode = BoundMode::iid;
  return out;
}

namespace {

// Exact sup_t |F_X(t) - F_Y(t)| for 1-d projections (two-sample KS walk).
double ks_statistic(std::vector<double>& a, std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() || j < b.size()) {
    const double t = (i < a.size() && (j >= b.size() || a[i] <= b[j])) ? a[i] : b[j];
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    best = std::max(best, std::abs(i / na - j / nb));
  }
  return best;
}

}  // namespace

double empirical_convex_discrepancy(const linalg::SampleSet& X, const linalg::SampleSet& Y,
                                    int n_halfspaces, linalg::RngStream& rng) {
  if (X.dim() != Y.dim()) throw DimensionMismatch("empirical_convex_discrepancy: dims differ");
  if (n_halfspaces < 100)
    throw DimensionMismatch("empirical_convex_discrepancy: need n_halfspaces >= 100");
  const int dim = X.dim();
  double best = 0.0;
  std::vector<double> px(X.n()), py(Y.n());
  for (int h = 0; h < n_halfspaces; ++h) {
    Eigen::VectorXd u = rng.gaussian_vector(dim);
    const double norm = u.norm();
    if (norm == 0.0) continue;
    u /= norm;
    for (int i = 0; i < X.n(); ++i) px[i] = X.rows.row(i).dot(u);
    for (int i = 0; i < Y.n(); ++i) py[i] = Y.rows.row(i).dot(u);
    best = std::max(best, ks_statistic(px, py));
  }
  return best;
}

}  // namespace convgp::cltbound
