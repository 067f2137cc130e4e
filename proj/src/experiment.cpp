#include "vsa/experiment.hpp"

#include "vsa/assignment.hpp"
#include "vsa/csv.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace vsa {

namespace {

double deg(double sine) { return std::asin(std::clamp(sine, -1.0, 1.0)) * 180.0 / std::numbers::pi; }

std::string params_field(const GeometryParams& p) {
  if (p.kind == ArrayKind::coprime) return "M=" + std::to_string(p.first) + ";N=" + std::to_string(p.second);
  return "N1=" + std::to_string(p.first) + ";N2=" + std::to_string(p.second);
}

struct MatchedErrors {
  double sin = 0.0;
  double deg = 0.0;
};

MatchedErrors matched_errors(const SourceSet& truth, const PairedEstimates& est) {
  const auto k = static_cast<Eigen::Index>(truth.size());
  if (static_cast<Eigen::Index>(est.size()) != k) throw ContractError("estimate count differs from truth");
  Eigen::MatrixXd cost(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& e = est[static_cast<std::size_t>(i)];
      const auto& t = truth[static_cast<std::size_t>(j)];
      cost(i, j) = std::pow(e.sin_theta - t.sin_theta, 2) + std::pow(e.sin_phi - t.sin_phi, 2);
    }
  const auto match = min_cost_assignment(cost);
  MatchedErrors out;
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto j = match[static_cast<std::size_t>(i)];
    const auto& e = est[static_cast<std::size_t>(i)];
    const auto& t = truth[static_cast<std::size_t>(j)];
    out.sin += cost(i, j);
    out.deg += std::pow(deg(e.sin_theta) - deg(t.sin_theta), 2) + std::pow(deg(e.sin_phi) - deg(t.sin_phi), 2);
  }
  return out;
}

}  // namespace

GeometrySummary summarize(const VShapedGeometry& geom) {
  return GeometrySummary{geom.params,
                         geom.total_sensors,
                         static_cast<int>(geom.portion_u.size()),
                         geom.omega_deg(),
                         difference_coarray(geom.portion_u).half_length,
                         max_resolvable(geom.params)};
}

std::string format_summary(const GeometrySummary& s) {
  char omega[32];
  std::snprintf(omega, sizeof omega, "%.4f", s.omega_deg);
  std::ostringstream os;
  os << "geometry: " << s.params.describe() << '\n'
     << "total sensors: " << s.sensors << " (" << s.portion_size << " per portion)\n"
     << "V-angle (deg): " << omega << '\n'
     << "virtual half-array L: " << s.half_length << '\n'
     << "max resolvable K: " << s.max_resolvable << '\n';
  return os.str();
}

std::vector<GeometryRow> geometry_report(const std::vector<GeometryParams>& params) {
  std::vector<GeometryRow> rows;
  rows.reserve(params.size());
  for (const auto& p : params) rows.push_back({std::nullopt, summarize(build_vshaped(p))});
  return rows;
}

std::vector<GeometryRow> comparison_table() {
  struct Entry {
    int k;
    GeometryParams vca;
    int vna_total;
  };
  const Entry entries[] = {
      {8, GeometryParams::coprime(2, 5), 6},   {10, GeometryParams::coprime(2, 5), 6},
      {12, GeometryParams::coprime(3, 5), 8},  {17, GeometryParams::coprime(2, 9), 8},
      {20, GeometryParams::coprime(4, 5), 10}, {28, GeometryParams::coprime(4, 7), 10},
  };
  std::vector<GeometryRow> rows;
  for (const auto& e : entries) {
    rows.push_back({e.k, summarize(build_vshaped(e.vca))});
    rows.push_back({e.k, summarize(build_vshaped(GeometryParams::nested_total(e.vna_total)))});
  }
  return rows;
}

void write_geometry_csv(const std::filesystem::path& path, const std::vector<GeometryRow>& rows) {
  csv::Writer w(path, {"k", "kind", "params", "sensor_count", "max_resolvable", "omega_deg", "L"});
  for (const auto& r : rows) {
    const auto& s = r.summary;
    w.row({r.required_sources ? std::to_string(*r.required_sources) : std::string{},
           s.params.kind == ArrayKind::coprime ? "VCA" : "VNA", params_field(s.params), std::to_string(s.sensors),
           std::to_string(s.max_resolvable), csv::number(s.omega_deg), std::to_string(s.half_length)});
  }
}

ScenarioRun run_scenario(const ScenarioConfig& config, bool keep_spectra) {
  validate(config);
  const auto geom = build_vshaped(config.geometry);
  SourceSet truth(expand_sources(config), geom.omega);
  const auto [u, v] = simulate_snapshots(geom, truth, config.snr_db, config.snapshots, config.seed);
  EstimatorOptions opts;
  opts.grid.points = config.grid_points;
  opts.keep_spectra = keep_spectra;
  auto result = estimate_2d(u, v, geom, static_cast<int>(truth.size()), opts);
  return ScenarioRun{summarize(geom), std::move(truth), std::move(result)};
}

void write_estimates_csv(const std::filesystem::path& path, const PairedEstimates& est) {
  csv::Writer w(path, {"k", "phi_a_hat", "vartheta_hat", "sin_theta_hat", "sin_phi_hat", "theta_deg", "phi_deg"});
  for (std::size_t k = 0; k < est.size(); ++k) {
    const auto& e = est[k];
    w.row({std::to_string(k), csv::number(e.phi_a), csv::number(e.vartheta), csv::number(e.sin_theta),
           csv::number(e.sin_phi), csv::number(deg(e.sin_theta)), csv::number(deg(e.sin_phi))});
  }
}

void write_spectra_csv(const std::filesystem::path& path, const EstimationResult& result, bool elevation) {
  std::vector<std::string> header{"psi", "P_u"};
  if (elevation)
    for (std::size_t k = 0; k < result.elevation_spectra.size(); ++k) header.push_back("P_v_" + std::to_string(k));
  csv::Writer w(path, header);
  const auto& az = result.azimuth_spectrum;
  for (Eigen::Index g = 0; g < az.psi.size(); ++g) {
    std::vector<std::string> row{csv::number(az.psi(g)), csv::number(az.power(g))};
    if (elevation)
      for (const auto& s : result.elevation_spectra) row.push_back(csv::number(s.power(g)));
    w.row(row);
  }
}

void write_snapshots_csv(const std::filesystem::path& path, const SnapshotMatrix& u, const SnapshotMatrix& v,
                         const VShapedGeometry& geom) {
  csv::Writer w(path, {"portion", "sensor", "lag", "snapshot", "re", "im"});
  auto dump = [&](const SnapshotMatrix& x, const SensorPositions& p, const char* name) {
    for (Eigen::Index t = 0; t < x.snapshots(); ++t)
      for (Eigen::Index i = 0; i < x.sensors(); ++i)
        w.row({name, std::to_string(i), std::to_string(p[static_cast<std::size_t>(i)]), std::to_string(t),
               csv::number(x.data(i, t).real()), csv::number(x.data(i, t).imag())});
  };
  dump(u, geom.portion_u, "U");
  dump(v, geom.portion_v, "V");
}

double matched_squared_error(const SourceSet& truth, const PairedEstimates& est, bool degrees) {
  const auto e = matched_errors(truth, est);
  return degrees ? e.deg : e.sin;
}

TrialOutcome run_trial(const VShapedGeometry& geom, const SourceSet& truth, double snr_db, int snapshots,
                       std::uint64_t seed, const EstimatorOptions& opts) {
  TrialOutcome out;
  try {
    const auto [u, v] = simulate_snapshots(geom, truth, snr_db, snapshots, seed);
    const auto est = estimate_2d(u, v, geom, static_cast<int>(truth.size()), opts);
    const auto e = matched_errors(truth, est.estimates);
    out.sq_error_sin = e.sin;
    out.sq_error_deg = e.deg;
  } catch (const EstimationError& e) {
    out.failed = true;
    out.failure = e.what();
  }
  return out;
}

RmseReport run_rmse(const ScenarioConfig& config, unsigned threads) {
  validate(config);
  if (config.snr_sweep.empty() == config.snapshot_sweep.empty())
    throw ConfigError("sweep: provide exactly one of snr_sweep or snapshot_sweep");
  const auto geom = build_vshaped(config.geometry);
  const SourceSet truth(expand_sources(config), geom.omega);
  EstimatorOptions opts;
  opts.grid.points = config.grid_points;

  RmseReport report;
  report.kind = config.snr_sweep.empty() ? SweepKind::snapshots : SweepKind::snr;
  const std::size_t points = report.kind == SweepKind::snr ? config.snr_sweep.size() : config.snapshot_sweep.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const double k2 = 2.0 * static_cast<double>(truth.size());

  for (std::size_t p = 0; p < points; ++p) {
    const double snr = report.kind == SweepKind::snr ? config.snr_sweep[p] : config.snr_db;
    const int snaps = report.kind == SweepKind::snapshots ? config.snapshot_sweep[p] : config.snapshots;

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.trials));
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int j = next++; j < config.trials; j = next++)
        outcomes[static_cast<std::size_t>(j)] =
            run_trial(geom, truth, snr, snaps, config.seed + static_cast<std::uint64_t>(j), opts);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<unsigned>(threads, static_cast<unsigned>(config.trials)); ++t)
      pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    RmsePoint pt;
    pt.sweep_value = report.kind == SweepKind::snr ? snr : static_cast<double>(snaps);
    pt.trials = config.trials;
    double sum_sin = 0.0, sum_sq_sin = 0.0, sum_deg = 0.0;
    int ok = 0;
    for (const auto& o : outcomes) {
      if (o.failed) {
        ++pt.failures;
        continue;
      }
      const double mse = o.sq_error_sin / k2;
      sum_sin += mse;
      sum_sq_sin += mse * mse;
      sum_deg += o.sq_error_deg / k2;
      ++ok;
    }
    if (ok == 0) {
      pt.rmse_sin = pt.rmse_deg = pt.rmse_stderr = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double mean = sum_sin / ok;
      pt.rmse_sin = std::sqrt(mean);
      pt.rmse_deg = std::sqrt(sum_deg / ok);
      // Delta method: se(sqrt(m)) = se(m) / (2 sqrt(m)).
      const double var = ok > 1 ? std::max(0.0, (sum_sq_sin - ok * mean * mean) / (ok - 1)) : 0.0;
      pt.rmse_stderr = pt.rmse_sin > 0.0 ? std::sqrt(var / ok) / (2.0 * pt.rmse_sin) : 0.0;
    }
    report.points.push_back(pt);
  }
  return report;
}

void write_rmse_csv(const std::filesystem::path& path, const RmseReport& report) {
  csv::Writer w(path, {report.kind == SweepKind::snr ? "snr_db" : "snapshots", "rmse_sin", "rmse_deg",
                       "rmse_stderr_sin", "failures", "trials"});
  for (const auto& p : report.points)
    w.row({csv::number(p.sweep_value), csv::number(p.rmse_sin), csv::number(p.rmse_deg), csv::number(p.rmse_stderr),
           std::to_string(p.failures), std::to_string(p.trials)});
}

}  // namespace vsa
