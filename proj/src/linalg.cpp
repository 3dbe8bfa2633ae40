#include "convgp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace convgp::linalg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Mix both identifiers so that nearby (seed, stream) pairs land far apart
  // in the engine's seed space.
  const std::uint64_t mixed = splitmix64(splitmix64(seed) ^ splitmix64(stream_id * 0x9e3779b97f4a7c15ULL + 1));
  engine_.seed(mixed);
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_gaussian_;
  }
  // Box-Muller; u1 shifted into (0,1] so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  cached_gaussian_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  // Rejection sampling on the top bits keeps the draw unbiased.
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % n;
}

RngStream RngStream::derive(std::uint64_t key) const {
  return RngStream(seed_, splitmix64(stream_id_ ^ splitmix64(key ^ 0xd6e8feb86659fd93ULL)));
}

Eigen::VectorXd RngStream::gaussian_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gaussian();
  return v;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols()) throw DimensionMismatch("SymMatrix: input is not square");
  const int n = static_cast<int>(raw.rows());
  m_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    m_(i, i) = raw(i, i);
    for (int k = i + 1; k < n; ++k) {
      const double v = 0.5 * (raw(i, k) + raw(k, i));
      m_(i, k) = v;
      m_(k, i) = v;
    }
  }
}

SymMatrix SymMatrix::identity(int dim) { return SymMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

SymMatrix SymMatrix::zero(int dim) { return SymMatrix(Eigen::MatrixXd::Zero(dim, dim)); }

namespace {

bool try_cholesky(const Eigen::MatrixXd& K, Eigen::MatrixXd& lower) {
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) return false;
  lower = llt.matrixL();
  if (!lower.allFinite()) return false;
  // Accept only if the factor actually reproduces the input.
  const double ref = std::max(K.norm(), 1e-300);
  const double err = (lower * lower.transpose() - K).norm() / ref;
  return err <= 1e-10;
}

}  // namespace

CholeskyFactor cholesky_psd(const SymMatrix& K, const JitterPolicy& policy) {
  const int n = K.dim();
  if (n < 1) throw DimensionMismatch("cholesky_psd: empty matrix");
  const double mean_diag = K.mat().trace() / static_cast<double>(n);
  // Degenerate matrices (zero trace) fall back to an absolute scale so the
  // schedule can still regularize them.
  const double scale = mean_diag > 0.0 ? mean_diag : 1.0;

  CholeskyFactor out;
  out.scale = scale;
  if (try_cholesky(K.mat(), out.lower)) {
    out.jitter_used = 0.0;
    return out;
  }
  for (double rel = policy.initial_rel; rel <= policy.max_rel * (1.0 + 1e-12); rel *= policy.factor) {
    Eigen::MatrixXd jittered = K.mat();
    jittered.diagonal().array() += rel * scale;
    if (try_cholesky(jittered, out.lower)) {
      out.jitter_used = rel;
      return out;
    }
  }
  throw NotPositiveDefinite("cholesky_psd: jitter schedule exhausted at relative " +
                            std::to_string(policy.max_rel));
}

SampleSet sample_mvn(const Eigen::VectorXd& mean, const SymMatrix& K, int n, RngStream& rng,
                     const JitterPolicy& policy) {
  if (mean.size() != K.dim()) throw DimensionMismatch("sample_mvn: mean/covariance dims differ");
  if (n < 1) throw DimensionMismatch("sample_mvn: need n >= 1");
  const CholeskyFactor chol = cholesky_psd(K, policy);
  SampleSet out;
  out.rows.resize(n, K.dim());
  Eigen::VectorXd eps(K.dim());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < K.dim(); ++j) eps(j) = rng.gaussian();
    out.rows.row(i) = (mean + chol.lower * eps).transpose();
  }
  return out;
}

double median_heuristic_bandwidth(const SampleSet& pooled) {
  const int n = pooled.n();
  if (n < 2) throw DegenerateSamples("median_heuristic_bandwidth: need at least 2 rows");
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      dists.push_back((pooled.rows.row(i) - pooled.rows.row(k)).norm());
  if (*std::max_element(dists.begin(), dists.end()) == 0.0)
    throw DegenerateSamples("median_heuristic_bandwidth: all pairwise distances are zero");
  const std::size_t mid = (dists.size() - 1) / 2;  // lower median
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
  return dists[mid];
}

}  // namespace convgp::linalg
