#pragma once

// MUSIC on the smoothed virtual half-array, peak extraction, and the paired
// 2-D pipeline: azimuth-associate angles from portion U, source powers from
// the U eigendecomposition, the V steering matrix from the U/V
// cross-covariance, and per-column elevation-associate MUSIC.

#include "vsa/covariance.hpp"
#include "vsa/geometry.hpp"
#include "vsa/signal.hpp"
#include "vsa/types.hpp"

#include <vector>

namespace vsa {

/// Uniform sine-domain search grid.
struct GridSpec {
  int points = 4001;
  double lo = -1.0;
  double hi = 1.0;

  double step() const { return (hi - lo) / (points - 1); }
  double at(int i) const { return lo + step() * i; }
  void validate() const;
};

struct SpectrumGrid {
  RVectord psi;
  RVectord power;  // pseudo-spectrum, finite and > 0
  double grid_step = 0.0;
};

/// MUSIC pseudo-spectrum of a smoothed covariance over virtual lags 0..L-1.
/// Requires 1 <= K <= L-1; otherwise EstimationError(Stage::subspace).
SpectrumGrid music_spectrum(const SmoothedCovariance<double>& rss, int num_sources, const GridSpec& grid = {});

/// Top-K local maxima ranked by power (ties: lower psi first), each refined by
/// a three-point parabola through the inverse spectrum. Returned ascending.
std::vector<double> pick_peaks(const SpectrumGrid& s, int num_sources);

/// Source correlation estimate A_u^+ E_s L_s E_s^H (A_u^H)^+ with signal
/// dimension min(K, P-1).
CMatrixd estimate_source_powers(const CMatrixd& r_u, const CMatrixd& a_u_hat);

/// Closed-form least-squares V steering matrix (Rs^+ A_u^+ R_uv)^H; column k
/// follows column k of `a_u_hat`.
CMatrixd estimate_av(const CMatrixd& r_uv, const CMatrixd& a_u_hat, const CMatrixd& rs_hat);

/// Rank-one MUSIC spectrum of a single estimated V steering column.
SpectrumGrid elevation_spectrum(const CVectord& av_column, const SensorPositions& p, const GridSpec& grid = {});

double elevation_per_source(const CVectord& av_column, const SensorPositions& p, const GridSpec& grid = {});

/// Elevation-associate angles paired, in order, with the given
/// azimuth-associate angles.
std::vector<double> pair_elevations(const CMatrixd& r_u, const CMatrixd& r_uv, const SensorPositions& portion_u,
                                    const SensorPositions& portion_v, const std::vector<double>& phi_a,
                                    const GridSpec& grid = {}, std::vector<SpectrumGrid>* spectra = nullptr);

struct PairedEstimate {
  double phi_a = 0.0;
  double vartheta = 0.0;
  double sin_theta = 0.0;
  double sin_phi = 0.0;
};

struct PairedEstimates {
  std::vector<PairedEstimate> items;  // ascending phi_a

  std::size_t size() const noexcept { return items.size(); }
  const PairedEstimate& operator[](std::size_t k) const { return items[k]; }
};

struct EstimatorOptions {
  GridSpec grid;
  bool keep_spectra = false;
};

struct EstimationResult {
  PairedEstimates estimates;
  SpectrumGrid azimuth_spectrum;               // filled when keep_spectra
  std::vector<SpectrumGrid> elevation_spectra;  // one per source, when keep_spectra
};

EstimationResult estimate_2d(const SnapshotMatrix& u, const SnapshotMatrix& v, const VShapedGeometry& geom,
                             int num_sources, const EstimatorOptions& opts = {});

/// Same pipeline driven by covariance matrices (sample or exact).
EstimationResult estimate_2d(const CMatrixd& r_u, const CMatrixd& r_uv, const VShapedGeometry& geom,
                             int num_sources, const EstimatorOptions& opts = {});

}  // namespace vsa
