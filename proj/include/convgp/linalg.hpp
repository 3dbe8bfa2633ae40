#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

#include "convgp/errors.hpp"

namespace convgp::linalg {

// Counter-style seeded random stream. A stream is identified by the pair
// (seed, stream_id); the same pair yields the same draw sequence regardless
// of which thread runs it or how many other streams exist. Workers never
// share a stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  // Standard normal via Box-Muller (pair cached).
  double gaussian();
  // Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);

  // Child stream keyed by `key`, independent of draws made so far.
  RngStream derive(std::uint64_t key) const;

  Eigen::VectorXd gaussian_vector(int n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double cached_gaussian_ = 0.0;
  bool has_cached_ = false;
};

// FNV-1a over a string, used to derive stream ids from grid-cell keys.
std::uint64_t fnv1a64(const std::string& s);

// Dense symmetric matrix with an exactly mirrored storage: entry (i,k)
// compares equal to (k,i) bit for bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  // Symmetrizes `raw` by averaging mirrored entries once and writing the
  // result to both triangles.
  explicit SymMatrix(const Eigen::MatrixXd& raw);

  static SymMatrix identity(int dim);
  static SymMatrix zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int k) const { return m_(i, k); }
  const Eigen::MatrixXd& mat() const { return m_; }
  Eigen::VectorXd diagonal() const { return m_.diagonal(); }

 private:
  Eigen::MatrixXd m_;
};

// Escalating relative jitter: initial_rel, initial_rel*factor, ... up to
// max_rel, with a plain (jitter-free) attempt first.
struct JitterPolicy {
  double initial_rel = 1e-10;
  double factor = 10.0;
  double max_rel = 1e-2;
};

struct CholeskyFactor {
  Eigen::MatrixXd lower;
  // Relative jitter that was added: the factor reconstructs
  // input + jitter_used * scale * I, where scale is trace/dim of the input
  // (or 1 when the trace is zero).
  double jitter_used = 0.0;
  double scale = 1.0;
};

// Cholesky factorization of a PSD matrix, escalating jitter until the
// factorization succeeds and reconstructs the (jittered) input to 1e-10
// relative Frobenius error. Throws NotPositiveDefinite when the whole
// schedule fails.
CholeskyFactor cholesky_psd(const SymMatrix& K, const JitterPolicy& policy = {});

enum class Provenance { none, cnn_prior, gp_prior };

struct SampleSet {
  Eigen::MatrixXd rows;  // n x dim, one draw per row
  Provenance provenance = Provenance::none;
  std::string meta;

  int n() const { return static_cast<int>(rows.rows()); }
  int dim() const { return static_cast<int>(rows.cols()); }
};

// n multivariate normal draws, row i = mean + L * eps_i.
SampleSet sample_mvn(const Eigen::VectorXd& mean, const SymMatrix& K, int n, RngStream& rng,
                     const JitterPolicy& policy = {});

// Median of pairwise Euclidean distances over all unordered row pairs of the
// pooled set; even counts take the lower median. Throws DegenerateSamples
// when every pairwise distance is zero.
double median_heuristic_bandwidth(const SampleSet& pooled);

}  // namespace convgp::linalg
