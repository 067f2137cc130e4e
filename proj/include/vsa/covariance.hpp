#pragma once

// Sample covariance, cross-covariance and the lag-averaged Toeplitz
// covariance of the virtual half-array.

#include "vsa/geometry.hpp"
#include "vsa/signal.hpp"
#include "vsa/types.hpp"

#include <string>
#include <vector>

namespace vsa {

template <typename Real>
struct SmoothedCovariance {
  CMatrix<Real> matrix;  // L x L, Toeplitz and Hermitian
  int half_length = 0;
  Portion source_portion = Portion::U;
};

template <typename Real>
CMatrix<Real> sample_covariance(const CMatrix<Real>& x) {
  if (x.cols() < 1) throw ContractError("sample_covariance: need at least one snapshot");
  return (x * x.adjoint()) / Real(x.cols());
}

inline CMatrixd sample_covariance(const SnapshotMatrix& x) { return sample_covariance<double>(x.data); }

template <typename Real>
CMatrix<Real> cross_covariance(const CMatrix<Real>& u, const CMatrix<Real>& v) {
  if (u.cols() != v.cols())
    throw ContractError("cross_covariance: snapshot counts differ (" + std::to_string(u.cols()) + " vs " +
                        std::to_string(v.cols()) + ")");
  if (u.cols() < 1) throw ContractError("cross_covariance: need at least one snapshot");
  return (u * v.adjoint()) / Real(u.cols());
}

inline CMatrixd cross_covariance(const SnapshotMatrix& u, const SnapshotMatrix& v) {
  return cross_covariance<double>(u.data, v.data);
}

/// Averages covariance entries sharing a co-array lag over the contiguous
/// segment [-(L-1), L-1] and assembles the L x L Toeplitz matrix whose (i, j)
/// entry is the averaged value at lag i - j. Conjugate symmetry is enforced by
/// averaging lag l with the conjugate of lag -l.
template <typename Real>
SmoothedCovariance<Real> smoothed_covariance(const CMatrix<Real>& r, const SensorPositions& p,
                                             Portion portion = Portion::U) {
  const auto n = static_cast<Eigen::Index>(p.size());
  if (r.rows() != n || r.cols() != n)
    throw ContractError("smoothed_covariance: covariance size does not match the portion");
  const int l_half = difference_coarray(p).half_length;
  if (l_half < 2) throw EstimationError(Stage::smoothing, "contiguous co-array is degenerate (L < 2)");

  const int max_lag = l_half - 1;
  std::vector<Complex<Real>> sum(static_cast<std::size_t>(2 * max_lag + 1), Complex<Real>(0));
  std::vector<int> count(sum.size(), 0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const int lag = p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(j)];
      if (lag < -max_lag || lag > max_lag) continue;
      sum[static_cast<std::size_t>(lag + max_lag)] += r(i, j);
      ++count[static_cast<std::size_t>(lag + max_lag)];
    }

  std::vector<Complex<Real>> lagged(sum.size());
  for (std::size_t k = 0; k < sum.size(); ++k) lagged[k] = sum[k] / Real(count[k]);

  auto at = [&](int lag) {
    const auto& pos = lagged[static_cast<std::size_t>(lag + max_lag)];
    const auto& neg = lagged[static_cast<std::size_t>(-lag + max_lag)];
    return (pos + std::conj(neg)) / Real(2);
  };

  SmoothedCovariance<Real> out{CMatrix<Real>(l_half, l_half), l_half, portion};
  for (int i = 0; i < l_half; ++i)
    for (int j = 0; j < l_half; ++j) out.matrix(i, j) = at(i - j);
  return out;
}

}  // namespace vsa
