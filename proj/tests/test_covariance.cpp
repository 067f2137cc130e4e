#include "oracles.hpp"
#include "vsa/covariance.hpp"
#include "vsa/numerics.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace vsa;

namespace {

CMatrixd exact_r(const SensorPositions& p, const std::vector<double>& psi, const std::vector<double>& power,
                 double noise = 0.0) {
  const CMatrixd a = steering_matrix<double>(p, psi);
  Eigen::VectorXd pw = Eigen::Map<const Eigen::VectorXd>(power.data(), static_cast<Eigen::Index>(power.size()));
  CMatrixd r = a * pw.cast<std::complex<double>>().asDiagonal() * a.adjoint();
  r.diagonal().array() += noise;
  return r;
}

bool exactly_toeplitz(const CMatrixd& m) {
  for (Eigen::Index i = 1; i < m.rows(); ++i)
    for (Eigen::Index j = 1; j < m.cols(); ++j)
      if (m(i, j) != m(i - 1, j - 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("sample_covariance of one snapshot is the outer product") {
  const CMatrixd x = oracle::random_complex(5, 1, 3);
  const CMatrixd r = sample_covariance<double>(x);
  CHECK((r - x * x.adjoint()).norm() < 1e-14);
  CHECK(numerical_rank<double>(r, 1e-10) == 1);
  CHECK_THROWS_AS(sample_covariance<double>(CMatrixd(5, 0)), ContractError);
}

TEST_CASE("sample_covariance converges to the model") {
  const auto geom = build_vshaped(GeometryParams::coprime(2, 5));
  const SourceSet src({{0.1, 0.2, 1.0}, {-0.15, -0.3, 1.0}}, geom.omega);
  const double nv = noise_variance_for(src, 10.0);
  const auto [u, v] = simulate_snapshots(geom, src, 10.0, 10000, 21);
  const auto m = model_statistics(geom, src, nv);
  const CMatrixd r = sample_covariance(u);
  CHECK((r - r.adjoint()).norm() == 0.0);
  CHECK(hermitian_eig<double>(r).values.minCoeff() > -1e-12);
  // 5% of the largest model entry.
  const double scale = m.r_u.cwiseAbs().maxCoeff();
  CHECK((r - m.r_u).cwiseAbs().maxCoeff() < 0.05 * scale);
  CHECK((cross_covariance(u, v) - m.r_uv).cwiseAbs().maxCoeff() < 0.05 * scale);
}

TEST_CASE("cross_covariance") {
  const auto geom = build_vshaped(GeometryParams::coprime(2, 5));
  const SourceSet one({{0.2, 0.1, 2.0}}, geom.omega);
  const auto m = model_statistics(geom, one, 0.0);
  const auto aa = one.associate()[0];
  const CMatrixd expect = 2.0 * steering_vector(geom.portion_u, aa.phi_a) *
                          steering_vector(geom.portion_v, aa.vartheta).adjoint();
  CHECK((m.r_uv - expect).norm() < 1e-12);
  CHECK(numerical_rank<double>(m.r_uv, 1e-10) == 1);

  // Independent pure-noise portions decorrelate like 1/sqrt(T).
  const CMatrixd nu = oracle::random_complex(8, 100000, 1) / std::sqrt(2.0);
  const CMatrixd nv = oracle::random_complex(8, 100000, 2) / std::sqrt(2.0);
  CHECK(cross_covariance<double>(nu, nv).cwiseAbs().maxCoeff() < 0.02);

  CHECK_THROWS_AS(cross_covariance<double>(CMatrixd(3, 4), CMatrixd(3, 5)), ContractError);
}

TEST_CASE("smoothed_covariance: single source gives the virtual Vandermonde outer product") {
  const auto p = coprime_portion(2, 5);
  const double psi = 0.37;
  const auto rss = smoothed_covariance<double>(exact_r(p, {psi}, {1.0}), p);
  CHECK(rss.half_length == 11);
  CHECK(rss.matrix.rows() == 11);
  std::vector<int> virt(11);
  std::iota(virt.begin(), virt.end(), 0);
  const CVectord a = steering_vector<double>(virt, psi);
  CHECK((rss.matrix - a * a.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(numerical_rank<double>(rss.matrix, 1e-9) == 1);
}

TEST_CASE("smoothed_covariance: lag averages match the brute-force oracle") {
  const auto p = nested_portion(3, 3);
  const CMatrixd r = oracle::random_hermitian(6, 17);
  const auto rss = smoothed_covariance<double>(r, p);
  CHECK(rss.half_length == 12);
  for (int l = 0; l <= 11; ++l) {
    std::complex<double> pos = 0.0, neg = 0.0;
    int npos = 0, nneg = 0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        if (p[i] - p[j] == l) pos += r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), ++npos;
        if (p[i] - p[j] == -l) neg += r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), ++nneg;
      }
    const auto expect = (pos / double(npos) + std::conj(neg / double(nneg))) / 2.0;
    CHECK(std::abs(rss.matrix(l, 0) - expect) < 1e-14);
  }
  CHECK(std::abs(rss.matrix(0, 0) - r.diagonal().mean().real()) < 1e-14);
}

TEST_CASE("smoothed_covariance: structure on noisy sample covariances") {
  const auto geom = build_vshaped(GeometryParams::coprime(3, 5));
  const SourceSet src({{0.1, 0.2, 1.0}, {-0.15, -0.3, 1.0}, {0.3, -0.1, 0.5}}, geom.omega);
  const auto [u, v] = simulate_snapshots(geom, src, 0.0, 200, 4);
  const CMatrixd r = sample_covariance(u);
  const auto rss = smoothed_covariance<double>(r, geom.portion_u);
  CHECK(rss.half_length == 16);
  CHECK(exactly_toeplitz(rss.matrix));
  CHECK(rss.matrix == CMatrixd(rss.matrix.adjoint()));
  CHECK(rss.matrix(0, 0).imag() == 0.0);
  CHECK(rss.matrix(0, 0).real() > 0.0);
  CHECK(std::abs(rss.matrix(0, 0) - r.diagonal().mean()) < 1e-12);
}

TEST_CASE("smoothed_covariance: noiseless rank equals K") {
  const auto p = coprime_portion(2, 5);
  for (int k = 1; k <= 10; ++k) {
    std::vector<double> psi, power;
    for (int i = 0; i < k; ++i) {
      psi.push_back(-0.8 + 1.6 * i / std::max(k - 1, 1) + (k == 1 ? 0.3 : 0.0));
      power.push_back(1.0 + 0.1 * i);
    }
    const auto rss = smoothed_covariance<double>(exact_r(p, psi, power), p);
    const auto eig = hermitian_eig<double>(rss.matrix);
    const auto above = (eig.values.array() > 1e-9 * eig.values(0)).count();
    CHECK(above == k);
    CHECK(eig.values.minCoeff() >= -1e-10 * eig.values(0));
  }
}

TEST_CASE("smoothed_covariance: invariant to sensor ordering") {
  // Relabel sensors by a permutation: lag averaging only sees position pairs.
  const auto p = coprime_portion(2, 5);
  const CMatrixd r = oracle::random_hermitian(8, 23);
  const auto base = smoothed_covariance<double>(r, p);
  std::vector<int> perm{3, 0, 7, 5, 1, 6, 2, 4};
  // Build a covariance over permuted rows, then undo it through a positions
  // list in the same permuted order using direct lag sums.
  std::vector<std::complex<double>> lag_sum(21, 0.0);
  std::vector<int> lag_count(21, 0);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int i = perm[static_cast<std::size_t>(a)], j = perm[static_cast<std::size_t>(b)];
      const int lag = p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(j)];
      if (std::abs(lag) > 10) continue;
      lag_sum[static_cast<std::size_t>(lag + 10)] += r(i, j);
      ++lag_count[static_cast<std::size_t>(lag + 10)];
    }
  for (int l = 0; l <= 10; ++l) {
    const auto pos = lag_sum[static_cast<std::size_t>(l + 10)] / double(lag_count[static_cast<std::size_t>(l + 10)]);
    const auto neg = lag_sum[static_cast<std::size_t>(10 - l)] / double(lag_count[static_cast<std::size_t>(10 - l)]);
    CHECK(std::abs(base.matrix(l, 0) - (pos + std::conj(neg)) / 2.0) < 1e-13);
  }
}

TEST_CASE("smoothed_covariance: degenerate co-array") {
  CHECK_THROWS_AS(smoothed_covariance<double>(CMatrixd::Ones(1, 1), SensorPositions({0})), EstimationError);
  CHECK_THROWS_AS(smoothed_covariance<double>(CMatrixd::Ones(3, 3), coprime_portion(2, 5)), ContractError);
}
