#pragma once

// Experiment drivers behind the CLI: single scenarios, Monte Carlo RMSE
// sweeps, geometry tables, and their CSV artifacts.

#include "vsa/estimator.hpp"
#include "vsa/geometry.hpp"
#include "vsa/scenario.hpp"
#include "vsa/signal.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vsa {

struct GeometrySummary {
  GeometryParams params;
  int sensors = 0;
  int portion_size = 0;
  double omega_deg = 0.0;
  int half_length = 0;
  int max_resolvable = 0;
};

GeometrySummary summarize(const VShapedGeometry& geom);
std::string format_summary(const GeometrySummary& s);

struct GeometryRow {
  std::optional<int> required_sources;
  GeometrySummary summary;
};

std::vector<GeometryRow> geometry_report(const std::vector<GeometryParams>& params);

/// VCA/VNA configurations compared for K = 8, 10, 12, 17, 20, 28 sources.
std::vector<GeometryRow> comparison_table();

void write_geometry_csv(const std::filesystem::path& path, const std::vector<GeometryRow>& rows);

struct ScenarioRun {
  GeometrySummary geometry;
  SourceSet truth;
  EstimationResult result;
};

ScenarioRun run_scenario(const ScenarioConfig& config, bool keep_spectra = true);

void write_estimates_csv(const std::filesystem::path& path, const PairedEstimates& est);
void write_spectra_csv(const std::filesystem::path& path, const EstimationResult& result, bool elevation);
void write_snapshots_csv(const std::filesystem::path& path, const SnapshotMatrix& u, const SnapshotMatrix& v,
                         const VShapedGeometry& geom);

/// Sum over sources of squared (sin theta, sin phi) errors after a
/// minimum-cost assignment of estimates to truth. `degrees` measures the
/// errors on the arcsine angles in degrees instead.
double matched_squared_error(const SourceSet& truth, const PairedEstimates& est, bool degrees = false);

struct TrialOutcome {
  bool failed = false;
  double sq_error_sin = 0.0;  // matched, summed over sources
  double sq_error_deg = 0.0;
  std::string failure;
};

TrialOutcome run_trial(const VShapedGeometry& geom, const SourceSet& truth, double snr_db, int snapshots,
                       std::uint64_t seed, const EstimatorOptions& opts);

enum class SweepKind { snr, snapshots };

struct RmsePoint {
  double sweep_value = 0.0;
  double rmse_sin = 0.0;     // NaN when every trial failed
  double rmse_deg = 0.0;
  double rmse_stderr = 0.0;  // Monte Carlo standard error of rmse_sin
  int failures = 0;
  int trials = 0;
};

struct RmseReport {
  SweepKind kind = SweepKind::snr;
  std::vector<RmsePoint> points;
};

/// Runs `config.trials` trials per sweep point; trial j uses seed
/// `config.seed + j`. Trials run on `threads` workers (0 = hardware
/// concurrency); results are aggregated in trial order.
RmseReport run_rmse(const ScenarioConfig& config, unsigned threads = 0);

void write_rmse_csv(const std::filesystem::path& path, const RmseReport& report);

}  // namespace vsa
