// vsa: V-shaped sparse array 2-D DOA experiments.
//
//   vsa geometry [--config cfg.json] [--out dir]
//   vsa simulate --config cfg.json [--seed S] [--out dir]
//   vsa estimate --config cfg.json [--seed S] [--grid G] [--out dir] [--elevation-spectra]
//   vsa rmse     --config cfg.json [--seed S] [--grid G] [--out dir] [--threads N]
//
// Exit codes: 0 success, 2 configuration error, 3 estimation failure.

#include "vsa/experiment.hpp"
#include "vsa/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEstimation = 3;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config, "Scenario JSON file");
  if (config_required) opt->required();
  cmd->add_option("--seed", f.seed, "Override the scenario seed");
  cmd->add_option("--grid", f.grid, "Override the number of search grid points");
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
}

vsa::ScenarioConfig load(const CommonFlags& f) {
  auto cfg = vsa::load_scenario(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.grid) cfg.grid_points = *f.grid;
  vsa::validate(cfg);
  return cfg;
}

fs::path out_dir(const CommonFlags& f) {
  fs::path dir(f.out);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"V-shaped sparse array 2-D DOA estimation"};
  app.require_subcommand(1);

  CommonFlags geometry_flags, simulate_flags, estimate_flags, rmse_flags;
  bool elevation_spectra = false;
  unsigned threads = 0;

  auto* geometry = app.add_subcommand("geometry", "Report sensor counts, V-angle and resolvability");
  add_common(geometry, geometry_flags, false);
  auto* simulate = app.add_subcommand("simulate", "Simulate snapshots of both portions to snapshots.csv");
  add_common(simulate, simulate_flags, true);
  auto* estimate = app.add_subcommand("estimate", "Run one paired 2-D estimation");
  add_common(estimate, estimate_flags, true);
  estimate->add_flag("--elevation-spectra", elevation_spectra, "Add per-source elevation spectra to spectra.csv");
  auto* rmse = app.add_subcommand("rmse", "Monte Carlo RMSE over an SNR or snapshot sweep");
  add_common(rmse, rmse_flags, true);
  rmse->add_option("--threads", threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*geometry) {
      std::vector<vsa::GeometryRow> rows;
      if (geometry_flags.config.empty()) {
        rows = vsa::comparison_table();
      } else {
        rows = vsa::geometry_report({load(geometry_flags).geometry});
      }
      for (const auto& r : rows) std::cout << vsa::format_summary(r.summary) << '\n';
      vsa::write_geometry_csv(out_dir(geometry_flags) / "geometry.csv", rows);
    } else if (*simulate) {
      const auto cfg = load(simulate_flags);
      const auto geom = vsa::build_vshaped(cfg.geometry);
      const vsa::SourceSet truth(vsa::expand_sources(cfg), geom.omega);
      const auto [u, v] = vsa::simulate_snapshots(geom, truth, cfg.snr_db, cfg.snapshots, cfg.seed);
      std::cout << vsa::format_summary(vsa::summarize(geom));
      vsa::write_snapshots_csv(out_dir(simulate_flags) / "snapshots.csv", u, v, geom);
    } else if (*estimate) {
      const auto cfg = load(estimate_flags);
      std::cout << vsa::format_summary(vsa::summarize(vsa::build_vshaped(cfg.geometry)));
      const auto run = vsa::run_scenario(cfg, true);
      const auto dir = out_dir(estimate_flags);
      vsa::write_estimates_csv(dir / "estimates.csv", run.result.estimates);
      vsa::write_spectra_csv(dir / "spectra.csv", run.result, elevation_spectra);
      for (const auto& e : run.result.estimates.items)
        std::printf("phi_a=%.6f vartheta=%.6f sin_theta=%.6f sin_phi=%.6f\n", e.phi_a, e.vartheta, e.sin_theta,
                    e.sin_phi);
    } else if (*rmse) {
      const auto cfg = load(rmse_flags);
      std::cout << vsa::format_summary(vsa::summarize(vsa::build_vshaped(cfg.geometry)));
      const auto report = vsa::run_rmse(cfg, threads);
      vsa::write_rmse_csv(out_dir(rmse_flags) / "rmse.csv", report);
      for (const auto& p : report.points)
        std::printf("%s=%g rmse_sin=%.6g failures=%d/%d\n", report.kind == vsa::SweepKind::snr ? "snr_db" : "T",
                    p.sweep_value, p.rmse_sin, p.failures, p.trials);
    }
  } catch (const vsa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const vsa::GeometryError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const vsa::EstimationError& e) {
    std::cerr << "estimation failed: " << e.what() << '\n';
    return kExitEstimation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
