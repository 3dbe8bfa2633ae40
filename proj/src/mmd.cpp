#include "convgp/mmd.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "convgp/kernels.hpp"

namespace convgp::mmd {

namespace {

Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& rows, double bandwidth) {
  const int n = static_cast<int>(rows.rows());
  const Eigen::VectorXd sq = rows.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                       2.0 * rows * rows.transpose();
  return (-d2.cwiseMax(0.0) / (2.0 * bandwidth * bandwidth)).array().exp();
}

double mmd2_from_gram(const Eigen::MatrixXd& G, const std::vector<int>& labels, int m, int n) {
  // labels[i] == 0 -> X, 1 -> Y; G is the pooled Gram matrix.
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  const int total = static_cast<int>(labels.size());
  for (int i = 0; i < total; ++i) {
    for (int j = i + 1; j < total; ++j) {
      const double g = G(i, j);
      if (labels[i] == 0 && labels[j] == 0)
        sxx += g;
      else if (labels[i] == 1 && labels[j] == 1)
        syy += g;
      else
        sxy += g;
    }
  }
  // Unordered pair sums double to ordered ones.
  return 2.0 * sxx / (static_cast<double>(m) * (m - 1)) +
         2.0 * syy / (static_cast<double>(n) * (n - 1)) -
         2.0 * sxy / (static_cast<double>(m) * n);
}

}  // namespace

namespace {

// Canonical argument order makes the estimator exactly symmetric: both call
// orders run identical floating-point arithmetic.
bool rows_before(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) < b(i, k)) return true;
      if (a(i, k) > b(i, k)) return false;
    }
  return false;
}

}  // namespace

MmdEstimate mmd2_unbiased(const linalg::SampleSet& X, const linalg::SampleSet& Y, double bandwidth) {
  if (X.dim() != Y.dim()) throw DimensionMismatch("mmd2_unbiased: sample dimensions differ");
  if (X.n() < 2 || Y.n() < 2) throw DimensionMismatch("mmd2_unbiased: need at least 2 rows per set");
  if (bandwidth <= 0.0) throw DimensionMismatch("mmd2_unbiased: bandwidth must be positive");
  if (rows_before(Y.rows, X.rows)) {
    MmdEstimate flipped = mmd2_unbiased(Y, X, bandwidth);
    std::swap(flipped.m, flipped.n);
    return flipped;
  }
  const int m = X.n(), n = Y.n();
  Eigen::MatrixXd pooled(m + n, X.dim());
  pooled.topRows(m) = X.rows;
  pooled.bottomRows(n) = Y.rows;
  const Eigen::MatrixXd G = rbf_gram(pooled, bandwidth);
  std::vector<int> labels(m + n, 0);
  std::fill(labels.begin() + m, labels.end(), 1);
  MmdEstimate out;
  out.mmd2 = mmd2_from_gram(G, labels, m, n);
  out.bandwidth = bandwidth;
  out.m = m;
  out.n = n;
  return out;
}

MmdEstimate mmd_permutation_test(const linalg::SampleSet& X, const linalg::SampleSet& Y,
                                 double bandwidth, int n_perm, linalg::RngStream& rng) {
  if (n_perm < 99) throw DimensionMismatch("mmd_permutation_test: need n_perm >= 99");
  MmdEstimate out = mmd2_unbiased(X, Y, bandwidth);
  const int m = X.n(), n = Y.n();
  Eigen::MatrixXd pooled(m + n, X.dim());
  pooled.topRows(m) = X.rows;
  pooled.bottomRows(n) = Y.rows;
  const Eigen::MatrixXd G = rbf_gram(pooled, bandwidth);

  std::vector<int> order(m + n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> labels(m + n);
  int count_ge = 0;
  for (int p = 0; p < n_perm; ++p) {
    // Fisher-Yates on the index array, then first m entries act as X.
    for (int i = m + n - 1; i > 0; --i) {
      const int k = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[i], order[k]);
    }
    for (int i = 0; i < m + n; ++i) labels[order[i]] = i < m ? 0 : 1;
    if (mmd2_from_gram(G, labels, m, n) >= out.mmd2) ++count_ge;
  }
  out.p_value = (count_ge + 1.0) / (n_perm + 1.0);
  return out;
}

MmdEstimate rbf_gp_baseline(int d, int n, linalg::RngStream& rng) {
  if (d < 2 || n < 2) throw DimensionMismatch("rbf_gp_baseline: need d >= 2 and n >= 2");
  std::vector<Eigen::VectorXd> grid;
  grid.reserve(d);
  for (int i = 0; i < d; ++i) grid.push_back(Eigen::VectorXd::Constant(1, static_cast<double>(i)));
  const linalg::SymMatrix K1 = kernels::rbf_kernel(grid, std::sqrt(2.0));
  const linalg::SymMatrix K2 = kernels::rbf_kernel(grid, 4.0 * std::sqrt(2.0));
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  const linalg::SampleSet X = linalg::sample_mvn(zero, K1, n, rng);
  const linalg::SampleSet Y = linalg::sample_mvn(zero, K2, n, rng);
  linalg::SampleSet pooled;
  pooled.rows.resize(2 * n, d);
  pooled.rows.topRows(n) = X.rows;
  pooled.rows.bottomRows(n) = Y.rows;
  return mmd2_unbiased(X, Y, linalg::median_heuristic_bandwidth(pooled));
}

}  // namespace convgp::mmd
