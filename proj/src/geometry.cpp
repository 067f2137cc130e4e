#include "vsa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

namespace vsa {

SensorPositions::SensorPositions(std::vector<int> lags, std::optional<int> designed_extent)
    : lags_(std::move(lags)), designed_extent_(designed_extent) {
  if (lags_.empty() || lags_.front() != 0)
    throw GeometryError("sensor positions must start at lag 0");
  int g = 0;
  for (std::size_t i = 1; i < lags_.size(); ++i) {
    if (lags_[i] <= lags_[i - 1]) throw GeometryError("sensor positions must be strictly increasing");
    g = std::gcd(g, lags_[i]);
  }
  // gcd > 1 would alias the physical-portion spectrum inside (-1, 1).
  if (lags_.size() > 1 && g != 1) throw GeometryError("gcd of non-zero sensor lags must be 1");
  if (designed_extent_ && *designed_extent_ < 0) throw GeometryError("designed extent must be non-negative");
}

std::string GeometryParams::describe() const {
  if (kind == ArrayKind::coprime)
    return "coprime(M=" + std::to_string(first) + ",N=" + std::to_string(second) + ")";
  return "nested(N1=" + std::to_string(first) + ",N2=" + std::to_string(second) + ")";
}

double VShapedGeometry::omega_deg() const { return omega * 180.0 / std::numbers::pi; }

void validate(const GeometryParams& params) {
  const int a = params.first;
  const int b = params.second;
  if (params.kind == ArrayKind::coprime) {
    if (a < 2 || b < 3) throw GeometryError("coprime portion needs M >= 2 and N >= 3");
    if (a >= b) throw GeometryError("coprime portion needs M < N");
    if (std::gcd(a, b) != 1) throw GeometryError("coprime portion needs gcd(M, N) = 1");
  } else {
    if (a < 1 || b < 1) throw GeometryError("nested portion needs N1 >= 1 and N2 >= 1");
  }
}

SensorPositions coprime_portion(int m, int n) {
  validate(GeometryParams::coprime(m, n));
  std::set<int> lags;
  for (int i = 0; i < 2 * m; ++i) lags.insert(n * i);
  for (int i = 0; i < n; ++i) lags.insert(m * i);
  return SensorPositions({lags.begin(), lags.end()}, m * n);
}

SensorPositions nested_portion(int n1, int n2) {
  validate(GeometryParams::nested(n1, n2));
  std::vector<int> lags;
  lags.reserve(static_cast<std::size_t>(n1 + n2));
  for (int i = 1; i <= n1; ++i) lags.push_back(i - 1);
  for (int i = 1; i <= n2; ++i) lags.push_back(i * (n1 + 1) - 1);
  return SensorPositions(std::move(lags));
}

double v_angle(int m_bar) {
  if (m_bar < 1) throw GeometryError("virtual array size must be positive");
  const double mb2 = static_cast<double>(m_bar) * m_bar;
  return 2.0 * std::atan(std::sqrt((mb2 + 3.0) / (4.0 * mb2)));
}

int portion_size(const GeometryParams& params) {
  validate(params);
  if (params.kind == ArrayKind::coprime) return 2 * params.first + params.second - 1;
  return params.first + params.second;
}

// The two coprime portions share the corner sensor at the origin. The nested
// count follows the 2N convention used for VNA comparisons.
int sensor_count(const GeometryParams& params) {
  validate(params);
  if (params.kind == ArrayKind::coprime) return 4 * params.first + 2 * params.second - 3;
  return 2 * (params.first + params.second);
}

int virtual_array_size(const GeometryParams& params) {
  validate(params);
  if (params.kind == ArrayKind::coprime) return 2 * params.first * params.second + 1;
  return 2 * (params.first + params.second) + 1;
}

// L - 1 for the smoothed virtual ULA. For balanced nested splits this is
// N^2/4 + N/2 - 1.
int max_resolvable(const GeometryParams& params) {
  validate(params);
  if (params.kind == ArrayKind::coprime) return params.first * params.second;
  return params.second * (params.first + 1) - 1;
}

VShapedGeometry build_vshaped(const GeometryParams& params) {
  validate(params);
  SensorPositions portion = params.kind == ArrayKind::coprime
                                ? coprime_portion(params.first, params.second)
                                : nested_portion(params.first, params.second);
  const int m_bar = virtual_array_size(params);
  return VShapedGeometry{params, portion, portion, v_angle(m_bar), m_bar, sensor_count(params)};
}

CoarrayInfo difference_coarray(const SensorPositions& p) {
  std::set<int> diffs;
  for (int a : p.lags())
    for (int b : p.lags()) diffs.insert(a - b);
  int run = 0;
  while (diffs.count(run + 1) != 0) ++run;
  if (auto cap = p.designed_extent()) run = std::min(run, *cap);
  return CoarrayInfo{{diffs.begin(), diffs.end()}, run + 1};
}

std::vector<std::pair<int, int>> lag_pairs(const SensorPositions& p, int lag) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(p.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(j)] == lag) out.emplace_back(i, j);
  if (out.empty()) throw LagError("lag " + std::to_string(lag) + " is not in the difference co-array");
  return out;
}

}  // namespace vsa
