#include "vsa/estimator.hpp"

#include "vsa/numerics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace vsa {

namespace {

constexpr double kDenominatorFloor = 1e-16;
constexpr double kRsCutoff = 1e-10;

CMatrixd grid_steering(std::span<const int> lags, const GridSpec& grid) {
  CMatrixd a(static_cast<Eigen::Index>(lags.size()), grid.points);
  for (int g = 0; g < grid.points; ++g) a.col(g) = steering_vector<double>(lags, grid.at(g));
  return a;
}

// 1 / max(||E^H a(psi)||^2, floor * ||a||^2) over the grid.
SpectrumGrid subspace_spectrum(const CMatrixd& noise_basis, std::span<const int> lags, const GridSpec& grid) {
  const CMatrixd a = grid_steering(lags, grid);
  const RVectord den = (noise_basis.adjoint() * a).colwise().squaredNorm().transpose();
  const double floor = kDenominatorFloor * static_cast<double>(lags.size());
  SpectrumGrid out{RVectord(grid.points), RVectord(grid.points), grid.step()};
  for (int g = 0; g < grid.points; ++g) {
    out.psi(g) = grid.at(g);
    out.power(g) = 1.0 / std::max(den(g), floor);
  }
  return out;
}

std::vector<int> iota_lags(int n) {
  std::vector<int> lags(static_cast<std::size_t>(n));
  std::iota(lags.begin(), lags.end(), 0);
  return lags;
}

}  // namespace

void GridSpec::validate() const {
  if (points < 3) throw ConfigError("grid_points: need at least 3 grid points");
  if (!(lo < hi) || lo < -1.0 || hi > 1.0) throw ConfigError("grid: interval must satisfy -1 <= lo < hi <= 1");
}

SpectrumGrid music_spectrum(const SmoothedCovariance<double>& rss, int num_sources, const GridSpec& grid) {
  grid.validate();
  const int l_half = static_cast<int>(rss.matrix.rows());
  if (num_sources < 1 || num_sources > l_half - 1)
    throw EstimationError(Stage::subspace, "K = " + std::to_string(num_sources) +
                                               " leaves no noise subspace for L = " + std::to_string(l_half));
  const auto eig = hermitian_eig<double>(rss.matrix);
  const CMatrixd noise = eig.vectors.rightCols(l_half - num_sources);
  const auto lags = iota_lags(l_half);
  return subspace_spectrum(noise, lags, grid);
}

std::vector<double> pick_peaks(const SpectrumGrid& s, int num_sources) {
  if (num_sources < 1) throw ContractError("pick_peaks: K must be positive");
  const auto n = s.power.size();
  std::vector<Eigen::Index> maxima;
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    if (s.power(i) > s.power(i - 1) && s.power(i) >= s.power(i + 1)) maxima.push_back(i);
  if (static_cast<int>(maxima.size()) < num_sources)
    throw EstimationError(Stage::detection, "found " + std::to_string(maxima.size()) + " spectral peaks, need " +
                                                std::to_string(num_sources));

  // Grid order is ascending psi, so a stable sort keeps lower psi first on ties.
  std::stable_sort(maxima.begin(), maxima.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return s.power(a) > s.power(b); });

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(num_sources));
  for (int k = 0; k < num_sources; ++k) {
    const Eigen::Index i = maxima[static_cast<std::size_t>(k)];
    const double left = 1.0 / s.power(i - 1);
    const double mid = 1.0 / s.power(i);
    const double right = 1.0 / s.power(i + 1);
    const double curvature = left - 2.0 * mid + right;
    double offset = curvature > 0.0 ? 0.5 * (left - right) / curvature : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    out.push_back(s.psi(i) + offset * s.grid_step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CMatrixd estimate_source_powers(const CMatrixd& r_u, const CMatrixd& a_u_hat) {
  const auto p = r_u.rows();
  if (r_u.cols() != p || a_u_hat.rows() != p)
    throw ContractError("estimate_source_powers: covariance and steering matrix sizes disagree");
  const auto k = a_u_hat.cols();
  const auto eig = hermitian_eig<double>(r_u);
  const auto s = std::min<Eigen::Index>(k, p - 1);
  const CMatrixd es = eig.vectors.leftCols(s);
  const CMatrixd signal_part = es * eig.values.head(s).cast<std::complex<double>>().asDiagonal() * es.adjoint();
  const CMatrixd a_pinv = pseudo_inverse<double>(a_u_hat);
  const CMatrixd a_h_pinv = pseudo_inverse<double>(CMatrixd(a_u_hat.adjoint()));
  CMatrixd rs = a_pinv * signal_part * a_h_pinv;
  if (!all_finite(rs) || rs.cwiseAbs().maxCoeff() == 0.0)
    throw EstimationError(Stage::conditioning, "source correlation estimate is degenerate");
  return rs;
}

CMatrixd estimate_av(const CMatrixd& r_uv, const CMatrixd& a_u_hat, const CMatrixd& rs_hat) {
  const auto k = a_u_hat.cols();
  if (rs_hat.rows() != k || rs_hat.cols() != k || r_uv.rows() != a_u_hat.rows())
    throw ContractError("estimate_av: shapes are not conformable");
  if (!all_finite(rs_hat) || rs_hat.cwiseAbs().maxCoeff() == 0.0)
    throw EstimationError(Stage::pairing, "source correlation estimate is singular");
  const CMatrixd rs_inv = pseudo_inverse<double>(rs_hat, kRsCutoff);
  return (rs_inv * pseudo_inverse<double>(a_u_hat) * r_uv).adjoint();
}

SpectrumGrid elevation_spectrum(const CVectord& av_column, const SensorPositions& p, const GridSpec& grid) {
  grid.validate();
  const auto n = static_cast<Eigen::Index>(p.size());
  if (av_column.size() != n) throw ContractError("elevation_spectrum: column length does not match the portion");
  if (n < 2) throw EstimationError(Stage::pairing, "portion has no noise subspace");
  if (!all_finite(av_column) || av_column.norm() == 0.0)
    throw EstimationError(Stage::pairing, "estimated steering column is zero");
  const CMatrixd rank_one = av_column * av_column.adjoint();
  const auto eig = hermitian_eig<double>(rank_one);
  const CMatrixd g = eig.vectors.rightCols(n - 1);
  return subspace_spectrum(g, p.lags(), grid);
}

double elevation_per_source(const CVectord& av_column, const SensorPositions& p, const GridSpec& grid) {
  return pick_peaks(elevation_spectrum(av_column, p, grid), 1).front();
}

std::vector<double> pair_elevations(const CMatrixd& r_u, const CMatrixd& r_uv, const SensorPositions& portion_u,
                                    const SensorPositions& portion_v, const std::vector<double>& phi_a,
                                    const GridSpec& grid, std::vector<SpectrumGrid>* spectra) {
  const CMatrixd a_u_hat = steering_matrix<double>(portion_u, phi_a);
  const CMatrixd rs_hat = estimate_source_powers(r_u, a_u_hat);
  const CMatrixd a_v_hat = estimate_av(r_uv, a_u_hat, rs_hat);
  std::vector<double> out;
  out.reserve(phi_a.size());
  for (Eigen::Index k = 0; k < a_v_hat.cols(); ++k) {
    auto spec = elevation_spectrum(a_v_hat.col(k), portion_v, grid);
    out.push_back(pick_peaks(spec, 1).front());
    if (spectra) spectra->push_back(std::move(spec));
  }
  return out;
}

EstimationResult estimate_2d(const CMatrixd& r_u, const CMatrixd& r_uv, const VShapedGeometry& geom,
                             int num_sources, const EstimatorOptions& opts) {
  if (num_sources < 1 || num_sources > max_resolvable(geom.params))
    throw ConfigError("K = " + std::to_string(num_sources) + " exceeds the resolvable limit " +
                      std::to_string(max_resolvable(geom.params)) + " of " + geom.params.describe());
  const auto rss = smoothed_covariance<double>(r_u, geom.portion_u, Portion::U);
  EstimationResult result;
  auto az = music_spectrum(rss, num_sources, opts.grid);
  const auto phi_a = pick_peaks(az, num_sources);

  std::vector<SpectrumGrid> elevation;
  const auto vartheta = pair_elevations(r_u, r_uv, geom.portion_u, geom.portion_v, phi_a, opts.grid,
                                        opts.keep_spectra ? &elevation : nullptr);

  result.estimates.items.reserve(phi_a.size());
  for (std::size_t k = 0; k < phi_a.size(); ++k) {
    const auto dir = recover_angles(phi_a[k], vartheta[k], geom.omega);
    result.estimates.items.push_back({phi_a[k], vartheta[k], dir.sin_theta, dir.sin_phi});
  }
  if (opts.keep_spectra) {
    result.azimuth_spectrum = std::move(az);
    result.elevation_spectra = std::move(elevation);
  }
  return result;
}

EstimationResult estimate_2d(const SnapshotMatrix& u, const SnapshotMatrix& v, const VShapedGeometry& geom,
                             int num_sources, const EstimatorOptions& opts) {
  if (u.sensors() != static_cast<Eigen::Index>(geom.portion_u.size()) ||
      v.sensors() != static_cast<Eigen::Index>(geom.portion_v.size()))
    throw ContractError("estimate_2d: snapshot rows do not match the portions");
  return estimate_2d(sample_covariance(u), cross_covariance(u, v), geom, num_sources, opts);
}

}  // namespace vsa
