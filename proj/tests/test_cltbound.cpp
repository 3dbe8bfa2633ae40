#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "convgp/cltbound.hpp"
#include "convgp/kernels.hpp"
#include "convgp/nets.hpp"

using namespace convgp;
using inputs::InputSeries;
using linalg::RngStream;

TEST_CASE("Gauss-Hermite quadrature reproduces standard normal moments") {
  CHECK(cltbound::gauss_hermite_expectation([](double g) { return g * g; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cltbound::gauss_hermite_expectation([](double g) { return g * g * g * g; }) ==
        doctest::Approx(3.0).epsilon(1e-10));
  // E|g|^3 = 2 sqrt(2/pi); the kink of |g|^3 limits 64-node GH to ~1e-4
  CHECK(cltbound::abs_gaussian_third_moment() ==
        doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(5e-4));
}

TEST_CASE("iid bound scales exactly as 1/sqrt(M) and d^{1/4}") {
  const double tm = cltbound::abs_gaussian_third_moment();
  for (int M : {4, 16, 64}) {
    const auto a = cltbound::iid_bound(M, 50, tm);
    const auto b = cltbound::iid_bound(4 * M, 50, tm);
    CHECK(b.bound_value / a.bound_value == 0.5);
  }
  const auto d1 = cltbound::iid_bound(10, 3, tm);
  const auto d16 = cltbound::iid_bound(10, 48, tm);
  CHECK(d16.bound_value / d1.bound_value == 2.0);
}

TEST_CASE("iid bound at d=1, M=100 with the Gaussian third moment") {
  // closed-form third moment: exact value
  const auto exact = cltbound::iid_bound(100, 1, 2.0 * std::sqrt(2.0 / M_PI));
  CHECK(exact.bound_value == doctest::Approx(2.0 * std::sqrt(2.0 / M_PI) / 10.0).epsilon(1e-14));
  // quadrature-evaluated third moment: same value to GH-64 accuracy
  const auto rep = cltbound::iid_bound(100, 1, cltbound::abs_gaussian_third_moment());
  CHECK(rep.bound_value == doctest::Approx(0.1596).epsilon(1e-3));
  CHECK(rep.d_quarter_factor == 1.0);
  CHECK(rep.bound_value == rep.d_quarter_factor * rep.sum_third_moments);
}

TEST_CASE("iid bound is monotone non-increasing in M") {
  const double tm = cltbound::abs_gaussian_third_moment();
  double prev = 1e300;
  for (int M : {2, 3, 4, 8, 64, 100, 1000}) {
    const double v = cltbound::iid_bound(M, 7, tm).bound_value;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("layer-1 bound with d_sub=1 and constant-magnitude inputs equals the iid bound") {
  InputSeries x;
  x.values.resize(12);
  for (int i = 0; i < 12; ++i) x.values(i) = (i % 2 == 0 ? 2.0 : -2.0);
  for (int M : {1, 2, 4, 8}) {
    const auto lay = cltbound::layer1_bound(x, M, 1.7, 1);
    const auto iid = cltbound::iid_bound(M, 1, cltbound::abs_gaussian_third_moment());
    CHECK(std::abs(lay.bound_value - iid.bound_value) <= 1e-12);
  }
}

TEST_CASE("layer-1 bound is invariant to input scaling") {
  RngStream rng(3, 0);
  const InputSeries x = inputs::gen_iid_gaussian(30, rng);
  InputSeries xs = x;
  xs.values *= 37.5;
  const auto a = cltbound::layer1_bound(x, 6, 1.0, 3);
  const auto b = cltbound::layer1_bound(xs, 6, 1.0, 3);
  CHECK(a.bound_value == doctest::Approx(b.bound_value).epsilon(1e-10));
  // and to the weight variance
  const auto c = cltbound::layer1_bound(x, 6, 4.0, 3);
  CHECK(a.bound_value == doctest::Approx(c.bound_value).epsilon(1e-10));
}

TEST_CASE("rank-deficient configurations raise SingularCovariance") {
  RngStream rng(5, 0);
  const InputSeries x = inputs::gen_iid_gaussian(20, rng);
  CHECK_THROWS_AS(cltbound::layer1_bound(x, 1, 1.0, 2), SingularCovariance);
  InputSeries constant;
  constant.values = Eigen::VectorXd::Ones(20);
  CHECK_THROWS_AS(cltbound::layer1_bound(constant, 4, 1.0, 2), SingularCovariance);
}

TEST_CASE("discrepancy surrogate vanishes on identical sets") {
  RngStream rng(7, 0);
  linalg::SampleSet X;
  X.rows.resize(500, 3);
  for (int i = 0; i < 500; ++i)
    for (int k = 0; k < 3; ++k) X.rows(i, k) = rng.gaussian();
  RngStream dirs(7, 1);
  CHECK(cltbound::empirical_convex_discrepancy(X, X, 100, dirs) == 0.0);
}

TEST_CASE("discrepancy surrogate saturates under a large shift") {
  RngStream rng(9, 0);
  linalg::SampleSet X, Y;
  X.rows.resize(800, 4);
  Y.rows.resize(800, 4);
  for (int i = 0; i < 800; ++i)
    for (int k = 0; k < 4; ++k) {
      X.rows(i, k) = rng.gaussian();
      Y.rows(i, k) = rng.gaussian() + 10.0;
    }
  RngStream dirs(9, 1);
  CHECK(cltbound::empirical_convex_discrepancy(X, Y, 200, dirs) > 0.95);
}

TEST_CASE("discrepancy surrogate stays at null level for equal laws") {
  int small = 0;
  for (int run = 0; run < 10; ++run) {
    RngStream rng(100 + static_cast<std::uint64_t>(run), 0);
    linalg::SampleSet X, Y;
    X.rows.resize(10000, 3);
    Y.rows.resize(10000, 3);
    for (int i = 0; i < 10000; ++i)
      for (int k = 0; k < 3; ++k) {
        X.rows(i, k) = rng.gaussian();
        Y.rows(i, k) = rng.gaussian();
      }
    RngStream dirs(100 + static_cast<std::uint64_t>(run), 1);
    if (cltbound::empirical_convex_discrepancy(X, Y, 100, dirs) <= 0.05) ++small;
  }
  CHECK(small >= 9);
}

TEST_CASE("layer-1 CNN samples stay at null discrepancy against their GP law") {
  RngStream xrng(11, 0);
  const InputSeries x = inputs::gen_iid_gaussian(40, xrng);
  const int M = 8, d_sub = 4, n = 4000;
  nets::NetworkArch arch;
  arch.depth = 1;
  arch.filter_width = M;
  RngStream crng(11, 1);
  auto cnn = nets::sample_cnn_prior(x, arch, n, crng);
  linalg::SampleSet cnn_sub;
  cnn_sub.rows = cnn.rows.rightCols(d_sub);

  const auto K1 = kernels::k1_same_input(x, M, 1.0, nets::PaddingMode::causal_same);
  const linalg::SymMatrix sigma2(K1.K.mat().bottomRightCorner(d_sub, d_sub));
  RngStream grng(11, 2);
  const auto gps = linalg::sample_mvn(Eigen::VectorXd::Zero(d_sub), sigma2, n, grng);

  linalg::SampleSet uniform;
  uniform.rows.resize(n, d_sub);
  RngStream urng(11, 3);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d_sub; ++k) uniform.rows(i, k) = 2.0 * urng.uniform01() - 1.0;

  RngStream d1(11, 4), d2(11, 4);
  const double cnn_vs_gp = cltbound::empirical_convex_discrepancy(cnn_sub, gps, 150, d1);
  const double noise_vs_gp = cltbound::empirical_convex_discrepancy(uniform, gps, 150, d2);
  CHECK(cnn_vs_gp <= noise_vs_gp);
  // the bound (universal constant 1) dominates the surrogate here
  const auto rep = cltbound::layer1_bound(x, M, 1.0, d_sub);
  CHECK(cnn_vs_gp <= rep.bound_value);
}
