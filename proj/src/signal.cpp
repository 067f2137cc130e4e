#include "vsa/signal.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace vsa {

namespace {

constexpr double kRecoverySlack = 1e-9;

enum Stream : std::uint32_t { kSourceStream = 0, kNoiseUStream = 1, kNoiseVStream = 2 };

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

// Circular complex Gaussian with E|z|^2 = variance.
void fill_circular_gaussian(CMatrixd& out, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      out(i, j) = {re, im};
    }
}

double clamp_unit(double x, const char* what) {
  if (!std::isfinite(x) || std::abs(x) > 1.0 + kRecoverySlack)
    throw EstimationError(Stage::recovery, std::string(what) + " = " + std::to_string(x) + " is outside [-1, 1]");
  return std::clamp(x, -1.0, 1.0);
}

}  // namespace

AssociateAngles associate_angles(double sin_theta, double sin_phi, double omega) {
  const double s = std::sin(omega / 2.0);
  const double c = std::cos(omega / 2.0);
  return {-sin_phi * s + sin_theta * c, sin_phi * s + sin_theta * c};
}

DirectionSines recover_angles(double phi_a, double vartheta, double omega) {
  const double s = std::sin(omega / 2.0);
  const double c = std::cos(omega / 2.0);
  const double sin_theta = clamp_unit((phi_a + vartheta) / (2.0 * c), "sin(theta)");
  const double sin_phi = clamp_unit((vartheta - sin_theta * c) / s, "sin(phi)");
  return {sin_theta, sin_phi};
}

SourceSet::SourceSet(std::vector<Source> sources, double omega) : sources_(std::move(sources)), omega_(omega) {
  if (sources_.empty()) throw ConfigError("sources: at least one source is required");
  if (!(omega > 0.0 && omega < std::numbers::pi)) throw ConfigError("sources: V-angle must lie in (0, pi)");
  for (std::size_t k = 0; k < sources_.size(); ++k) {
    const auto& s = sources_[k];
    const std::string tag = "sources[" + std::to_string(k) + "]: ";
    if (!(std::abs(s.sin_theta) <= 1.0) || !(std::abs(s.sin_phi) <= 1.0))
      throw ConfigError(tag + "sin_theta and sin_phi must lie in [-1, 1]");
    if (!(s.power > 0.0) || !std::isfinite(s.power)) throw ConfigError(tag + "power must be positive and finite");
    const auto aa = associate_angles(s.sin_theta, s.sin_phi, omega);
    if (!(std::abs(aa.phi_a) < 1.0) || !(std::abs(aa.vartheta) < 1.0))
      throw ConfigError(tag + "associate angles leave (-1, 1); the virtual array would alias");
    for (std::size_t j = 0; j < k; ++j)
      if (sources_[j].sin_theta == s.sin_theta && sources_[j].sin_phi == s.sin_phi)
        throw ConfigError(tag + "duplicates sources[" + std::to_string(j) + "]");
  }
}

double SourceSet::mean_power() const {
  double sum = 0.0;
  for (const auto& s : sources_) sum += s.power;
  return sum / static_cast<double>(sources_.size());
}

std::vector<AssociateAngles> SourceSet::associate() const {
  std::vector<AssociateAngles> out;
  out.reserve(sources_.size());
  for (const auto& s : sources_) out.push_back(associate_angles(s.sin_theta, s.sin_phi, omega_));
  return out;
}

double noise_variance_for(const SourceSet& src, double snr_db) {
  if (std::isnan(snr_db)) throw ConfigError("snr_db: must be a number or +inf");
  if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
  if (std::isinf(snr_db)) throw ConfigError("snr_db: -inf is not a valid SNR");
  return src.mean_power() / std::pow(10.0, snr_db / 10.0);
}

namespace {

CMatrixd portion_steering(const SensorPositions& p, const std::vector<AssociateAngles>& aa, bool u_axis) {
  std::vector<double> psis;
  psis.reserve(aa.size());
  for (const auto& a : aa) psis.push_back(u_axis ? a.phi_a : a.vartheta);
  return steering_matrix<double>(p, psis);
}

}  // namespace

std::pair<SnapshotMatrix, SnapshotMatrix> simulate_snapshots(const VShapedGeometry& geom, const SourceSet& src,
                                                             double snr_db, int snapshots, std::uint64_t seed) {
  if (snapshots < 1) throw ConfigError("snapshots: must be at least 1");
  const double noise_var = noise_variance_for(src, snr_db);
  const auto aa = src.associate();
  const auto k = static_cast<Eigen::Index>(src.size());

  CMatrixd waveforms(k, snapshots);
  auto source_rng = make_stream(seed, kSourceStream);
  fill_circular_gaussian(waveforms, 1.0, source_rng);
  for (Eigen::Index i = 0; i < k; ++i) waveforms.row(i) *= std::sqrt(src[static_cast<std::size_t>(i)].power);

  auto make = [&](Portion portion, const SensorPositions& p, Stream stream) {
    SnapshotMatrix x{portion, portion_steering(p, aa, portion == Portion::U) * waveforms, noise_var};
    if (noise_var > 0.0) {
      CMatrixd noise(x.data.rows(), x.data.cols());
      auto rng = make_stream(seed, stream);
      fill_circular_gaussian(noise, noise_var, rng);
      x.data += noise;
    }
    return x;
  };
  return {make(Portion::U, geom.portion_u, kNoiseUStream), make(Portion::V, geom.portion_v, kNoiseVStream)};
}

ModelStatistics model_statistics(const VShapedGeometry& geom, const SourceSet& src, double noise_variance) {
  const auto aa = src.associate();
  const CMatrixd a_u = portion_steering(geom.portion_u, aa, true);
  const CMatrixd a_v = portion_steering(geom.portion_v, aa, false);
  Eigen::VectorXd p(static_cast<Eigen::Index>(src.size()));
  for (std::size_t i = 0; i < src.size(); ++i) p(static_cast<Eigen::Index>(i)) = src[i].power;
  const CMatrixd r_s = p.cast<std::complex<double>>().asDiagonal();
  ModelStatistics out;
  out.r_u = a_u * r_s * a_u.adjoint();
  out.r_u.diagonal().array() += noise_variance;
  out.r_v = a_v * r_s * a_v.adjoint();
  out.r_v.diagonal().array() += noise_variance;
  out.r_uv = a_u * r_s * a_v.adjoint();
  return out;
}

}  // namespace vsa
