#include "convgp/gp.hpp"

namespace convgp::gp {

linalg::SampleSet gp_prior_sample(const kernels::KernelMatrix& K, int n, linalg::RngStream& rng) {
  linalg::SampleSet out =
      linalg::sample_mvn(Eigen::VectorXd::Zero(K.dim()), K.K, n, rng);
  out.provenance = linalg::Provenance::gp_prior;
  return out;
}

PosteriorResult gp_posterior(const linalg::SymMatrix& K_xx, const Eigen::MatrixXd& K_sx,
                             const linalg::SymMatrix& K_ss, const Eigen::VectorXd& y,
                             double sigma_eps2) {
  const int n_train = K_xx.dim();
  const int n_test = K_ss.dim();
  if (K_sx.rows() != n_test || K_sx.cols() != n_train)
    throw DimensionMismatch("gp_posterior: K_sx must be n_test x n_train");
  if (y.size() != n_train) throw DimensionMismatch("gp_posterior: y length mismatch");
  if (sigma_eps2 < 0.0) throw DimensionMismatch("gp_posterior: sigma_eps2 must be >= 0");

  Eigen::MatrixXd A = K_xx.mat();
  A.diagonal().array() += sigma_eps2;
  const linalg::CholeskyFactor chol = linalg::cholesky_psd(linalg::SymMatrix(A));
  const auto L = chol.lower.triangularView<Eigen::Lower>();

  const Eigen::VectorXd alpha = L.transpose().solve(L.solve(y));
  // V = L^-1 K_sx^T, so K_sx A^-1 K_sx^T = V^T V.
  const Eigen::MatrixXd V = L.solve(K_sx.transpose());

  PosteriorResult out;
  out.sigma_eps2 = sigma_eps2;
  out.jitter_used = chol.jitter_used;
  out.mean = K_sx * alpha;
  Eigen::MatrixXd cov = K_ss.mat() - V.transpose() * V;
  for (int i = 0; i < n_test; ++i) {
    if (cov(i, i) < 0.0) {
      cov(i, i) = 0.0;
      ++out.clip_count;
    }
  }
  out.cov = linalg::SymMatrix(cov);
  return out;
}

}  // namespace convgp::gp
