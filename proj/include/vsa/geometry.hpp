#pragma once

// Sparse linear portions (coprime, nested), the V-shaped array built from two
// mirror copies of a portion, and difference co-array bookkeeping.
//
// Positions are integer multiples of the half-wavelength spacing d.

#include "vsa/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vsa {

/// Sorted, distinct, non-negative sensor lags of one linear portion.
///
/// `designed_extent` caps the contiguous co-array used for smoothing. Coprime
/// portions set it to MN: their difference set may stay hole-free a little
/// beyond MN (lag 11 for M=2, N=5) but only [-MN, MN] is guaranteed.
class SensorPositions {
 public:
  explicit SensorPositions(std::vector<int> lags, std::optional<int> designed_extent = std::nullopt);

  const std::vector<int>& lags() const noexcept { return lags_; }
  std::size_t size() const noexcept { return lags_.size(); }
  int operator[](std::size_t i) const { return lags_[i]; }
  int aperture() const noexcept { return lags_.back(); }
  std::optional<int> designed_extent() const noexcept { return designed_extent_; }

  friend bool operator==(const SensorPositions&, const SensorPositions&) = default;

 private:
  std::vector<int> lags_;
  std::optional<int> designed_extent_;
};

enum class ArrayKind { coprime, nested };

/// Coprime: (first, second) = (M, N). Nested: (first, second) = (N1, N2).
struct GeometryParams {
  ArrayKind kind = ArrayKind::coprime;
  int first = 0;
  int second = 0;

  static GeometryParams coprime(int m, int n) { return {ArrayKind::coprime, m, n}; }
  static GeometryParams nested(int n1, int n2) { return {ArrayKind::nested, n1, n2}; }
  /// Balanced nested split of N sensors per portion: N1 = floor(N/2), N2 = N - N1.
  static GeometryParams nested_total(int n) { return {ArrayKind::nested, n / 2, n - n / 2}; }

  std::string describe() const;
  friend bool operator==(const GeometryParams&, const GeometryParams&) = default;
};

struct VShapedGeometry {
  GeometryParams params;
  SensorPositions portion_u;
  SensorPositions portion_v;
  double omega = 0.0;  // radians
  int m_bar = 0;
  int total_sensors = 0;

  double omega_deg() const;
};

struct CoarrayInfo {
  std::vector<int> difference_set;  // sorted, symmetric about 0
  int half_length = 0;              // L; contiguous segment is [-(L-1), L-1]

  int max_contiguous_lag() const noexcept { return half_length - 1; }
};

SensorPositions coprime_portion(int m, int n);
SensorPositions nested_portion(int n1, int n2);

/// V-angle that decouples azimuth and elevation for an `m_bar`-sensor virtual array.
double v_angle(int m_bar);

VShapedGeometry build_vshaped(const GeometryParams& params);

CoarrayInfo difference_coarray(const SensorPositions& p);

/// Index pairs (i, j) with p[i] - p[j] == lag. Throws LagError when the lag
/// is absent from the difference set.
std::vector<std::pair<int, int>> lag_pairs(const SensorPositions& p, int lag);

int max_resolvable(const GeometryParams& params);
int sensor_count(const GeometryParams& params);
int portion_size(const GeometryParams& params);
int virtual_array_size(const GeometryParams& params);

/// Validates parameters without building; throws GeometryError.
void validate(const GeometryParams& params);

}  // namespace vsa
