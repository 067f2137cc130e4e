#pragma once

// Sources, associate-angle transforms, steering vectors and snapshot simulation.
// All angles live in the sine domain; degrees are for presentation only.

#include "vsa/geometry.hpp"
#include "vsa/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace vsa {

struct Source {
  double sin_theta = 0.0;  // elevation
  double sin_phi = 0.0;    // azimuth
  double power = 1.0;
};

struct AssociateAngles {
  double phi_a = 0.0;     // seen by portion U
  double vartheta = 0.0;  // seen by portion V
};

struct DirectionSines {
  double sin_theta = 0.0;
  double sin_phi = 0.0;
};

AssociateAngles associate_angles(double sin_theta, double sin_phi, double omega);

/// Inverse of associate_angles. Throws EstimationError(Stage::recovery) when
/// either sine falls outside [-1, 1] by more than 1e-9; values inside that
/// slack are clamped.
DirectionSines recover_angles(double phi_a, double vartheta, double omega);

/// Validated, non-empty list of distinct sources whose associate angles stay
/// inside (-1, 1) for the V-angle it was checked against.
class SourceSet {
 public:
  SourceSet(std::vector<Source> sources, double omega);

  const std::vector<Source>& sources() const noexcept { return sources_; }
  std::size_t size() const noexcept { return sources_.size(); }
  const Source& operator[](std::size_t k) const { return sources_[k]; }
  double omega() const noexcept { return omega_; }
  double mean_power() const;
  std::vector<AssociateAngles> associate() const;

 private:
  std::vector<Source> sources_;
  double omega_;
};

/// exp(j*pi*lag*psi) for every lag of the portion.
template <typename Real = double>
CVector<Real> steering_vector(std::span<const int> lags, Real psi) {
  CVector<Real> a(static_cast<Eigen::Index>(lags.size()));
  for (std::size_t i = 0; i < lags.size(); ++i)
    a(static_cast<Eigen::Index>(i)) = std::polar(Real(1), std::numbers::pi_v<Real> * Real(lags[i]) * psi);
  return a;
}

template <typename Real = double>
CVector<Real> steering_vector(const SensorPositions& p, Real psi) {
  return steering_vector<Real>(std::span<const int>(p.lags()), psi);
}

/// Steering vectors for each psi stacked as columns.
template <typename Real = double>
CMatrix<Real> steering_matrix(const SensorPositions& p, std::span<const Real> psis) {
  CMatrix<Real> a(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(psis.size()));
  for (std::size_t k = 0; k < psis.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = steering_vector<Real>(p, psis[k]);
  return a;
}

struct SnapshotMatrix {
  Portion portion = Portion::U;
  CMatrixd data;  // sensors x snapshots
  double noise_variance = 0.0;

  Eigen::Index sensors() const { return data.rows(); }
  Eigen::Index snapshots() const { return data.cols(); }
};

/// Noise variance per sensor for an SNR defined as mean source power over
/// noise power. `+inf` dB gives a noiseless model.
double noise_variance_for(const SourceSet& src, double snr_db);

/// Simulates both portions with a shared source waveform realization.
/// Source waveforms and each portion's noise use separate streams derived from
/// `seed`, so runs are reproducible.
std::pair<SnapshotMatrix, SnapshotMatrix> simulate_snapshots(const VShapedGeometry& geom, const SourceSet& src,
                                                             double snr_db, int snapshots, std::uint64_t seed);

/// Exact second-order statistics of the snapshot model.
struct ModelStatistics {
  CMatrixd r_u;
  CMatrixd r_v;
  CMatrixd r_uv;
};

ModelStatistics model_statistics(const VShapedGeometry& geom, const SourceSet& src, double noise_variance);

}  // namespace vsa
