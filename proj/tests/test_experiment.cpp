#include "vsa/assignment.hpp"
#include "vsa/csv.hpp"
#include "vsa/experiment.hpp"
#include "vsa/scenario.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace vsa;

namespace {

double brute_force_min(const Eigen::MatrixXd& cost) {
  std::vector<int> cols(static_cast<std::size_t>(cost.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) s += cost(i, cols[static_cast<std::size_t>(i)]);
    best = std::min(best, s);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBase = R"({
  "geometry": {"kind": "coprime", "M": 2, "N": 5},
  "sources": [{"sin_theta": 0.1, "sin_phi": 0.2}, {"sin_theta": -0.2, "sin_phi": -0.3, "power": 2}],
  "snr_db": 0, "snapshots": 200, "seed": 5, "grid_points": 2001, "trials": 4
})";

}  // namespace

TEST_CASE("min_cost_assignment matches exhaustive search") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + trial % 6;
    const int cols = rows + (trial % 3 == 0 ? 1 : 0);
    Eigen::MatrixXd cost(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) cost(i, j) = trial % 5 == 0 ? std::floor(u(rng)) : u(rng);
    const auto match = min_cost_assignment(cost);
    REQUIRE(match.size() == static_cast<std::size_t>(rows));
    std::vector<int> sorted = match;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    double total = 0.0;
    for (Eigen::Index i = 0; i < rows; ++i) total += cost(i, match[static_cast<std::size_t>(i)]);
    // Square problems only: the oracle enumerates full permutations.
    if (rows == cols) CHECK(total == doctest::Approx(brute_force_min(cost)).epsilon(1e-12));
  }
  CHECK_THROWS(min_cost_assignment(Eigen::MatrixXd::Zero(3, 2)));
}

TEST_CASE("matched error ignores the order of estimates") {
  const SourceSet truth({{0.1, 0.2, 1.0}, {-0.2, -0.3, 1.0}, {0.4, 0.0, 1.0}}, v_angle(21));
  PairedEstimates est;
  est.items = {{0, 0, 0.11, 0.19}, {0, 0, -0.21, -0.28}, {0, 0, 0.38, 0.01}};
  const double base = matched_squared_error(truth, est);
  CHECK(base == doctest::Approx(0.0001 + 0.0001 + 0.0001 + 0.0004 + 0.0004 + 0.0001));
  std::vector<std::size_t> order{0, 1, 2};
  while (std::next_permutation(order.begin(), order.end())) {
    PairedEstimates p;
    for (auto i : order) p.items.push_back(est.items[i]);
    CHECK(matched_squared_error(truth, p) == doctest::Approx(base).epsilon(1e-14));
  }
  CHECK(matched_squared_error(truth, est, true) > base);
}

TEST_CASE("parse_scenario") {
  const auto cfg = parse_scenario(kBase);
  CHECK(cfg.geometry == GeometryParams::coprime(2, 5));
  CHECK(cfg.num_sources() == 2);
  CHECK(expand_sources(cfg)[1].power == 2.0);
  CHECK(expand_sources(cfg)[0].power == 1.0);
  CHECK(cfg.seed == 5);
  CHECK(parse_scenario(to_json(cfg)).snapshots == 200);

  std::string unknown = kBase;
  unknown.insert(unknown.rfind('}'), R"(, "snr": 3)");
  CHECK_THROWS_WITH_AS(parse_scenario(unknown), doctest::Contains("snr: unknown field"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"geometry": {"kind": "coprime", "M": 2, "N": 5, "d": 1}, "sources": []})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario("{not json"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario(R"({"geometry": {"kind": "coprime", "M": 2, "N": 4},
                                          "sources": [{"sin_theta": 0, "sin_phi": 0}]})"),
                       doctest::Contains("geometry"), ConfigError);

  const auto inf = parse_scenario(R"({"geometry": {"kind": "nested", "N1": 2, "N2": 2},
      "sources": [{"sin_theta": 0, "sin_phi": 0}], "snr_db": "inf", "snr_sweep": [0, "inf"]})");
  CHECK(std::isinf(inf.snr_db));
  CHECK(std::isinf(inf.snr_sweep[1]));
  CHECK(std::isinf(parse_scenario(to_json(inf)).snr_db));
}

TEST_CASE("source generator") {
  SUBCASE("eleven sources exceed coprime(2,5)") {
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"geometry": {"kind": "coprime", "M": 2, "N": 5},
        "sources": {"count": 11, "sin_phi_interval": [-0.45, 0.45], "sin_theta_interval": [-0.1, 0.1]}})"),
                         doctest::Contains("exceeds"), ConfigError);
  }
  SUBCASE("explicit permutation") {
    const auto cfg = parse_scenario(R"({"geometry": {"kind": "nested", "N1": 2, "N2": 2},
        "sources": {"count": 4, "sin_phi_interval": [-0.1, 0.1], "sin_theta_interval": [-0.4, 0.4],
                    "pairing": [1, 0, 3, 2], "powers": [1, 0.49, 0.16, 0.09]}})");
    const auto s = expand_sources(cfg);
    REQUIRE(s.size() == 4);
    const double theta[] = {-0.4 / 3.0, -0.4, 0.4, 0.4 / 3.0};
    const double phi[] = {-0.1, -0.1 / 3.0, 0.1 / 3.0, 0.1};
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(s[k].sin_theta == doctest::Approx(theta[k]).epsilon(1e-12));
      CHECK(s[k].sin_phi == doctest::Approx(phi[k]).epsilon(1e-12));
    }
    CHECK(s[3].power == 0.09);
  }
  SUBCASE("joint increasing and bad permutations") {
    const auto cfg = parse_scenario(R"({"geometry": {"kind": "coprime", "M": 2, "N": 5},
        "sources": {"count": 3, "sin_phi_interval": [-0.3, 0.3], "sin_theta_interval": [0, 0.2],
                    "pairing": "joint-increasing"}})");
    const auto s = expand_sources(cfg);
    CHECK(s[0].sin_theta == 0.0);
    CHECK(s[2].sin_phi == doctest::Approx(0.3));
    CHECK_THROWS_AS(parse_scenario(R"({"geometry": {"kind": "coprime", "M": 2, "N": 5},
        "sources": {"count": 3, "sin_phi_interval": [-0.3, 0.3], "sin_theta_interval": [0, 0.2],
                    "pairing": [0, 0, 1]}})"),
                    ConfigError);
  }
}

TEST_CASE("comparison_table") {
  const auto rows = comparison_table();
  REQUIRE(rows.size() == 12);
  const int sensors[] = {15, 12, 15, 12, 19, 16, 23, 16, 23, 20, 27, 20};
  const int ks[] = {8, 8, 10, 10, 12, 12, 17, 17, 20, 20, 28, 28};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].summary.sensors == sensors[i]);
    CHECK(rows[i].required_sources == ks[i]);
    CHECK(rows[i].summary.max_resolvable >= ks[i]);
    CHECK(rows[i].summary.sensors == sensor_count(rows[i].summary.params));
    CHECK(rows[i].summary.max_resolvable == max_resolvable(rows[i].summary.params));
  }
  CHECK(rows[1].summary.max_resolvable == 11);

  const auto dir = std::filesystem::temp_directory_path() / "vsa_test_geometry";
  std::filesystem::create_directories(dir);
  write_geometry_csv(dir / "g.csv", rows);
  const auto text = slurp(dir / "g.csv");
  CHECK(text.rfind("k,kind,params,sensor_count,max_resolvable,omega_deg,L\n8,VCA,M=2;N=5,15,10,", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("csv number formatting") {
  CHECK(csv::number(53.28563912345678) == "53.28563912");
  CHECK(csv::number(1e-20) == "1e-20");
  CHECK(csv::number(-0.0) == "0");
  CHECK(csv::number(std::nan("")).empty());
  CHECK(csv::number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("run_scenario: single noiseless source") {
  auto cfg = parse_scenario(kBase);
  cfg.sources = std::vector<Source>{{0.23, -0.17, 1.0}};
  cfg.snr_db = std::numeric_limits<double>::infinity();
  cfg.snapshots = 50;
  const auto run = run_scenario(cfg);
  REQUIRE(run.result.estimates.size() == 1);
  CHECK(std::abs(run.result.estimates[0].sin_theta - 0.23) < 1e-4);
  CHECK(std::abs(run.result.estimates[0].sin_phi - -0.17) < 1e-4);
  CHECK(run.geometry.omega_deg == doctest::Approx(53.2856).epsilon(1e-6));
}

TEST_CASE("run_rmse") {
  SUBCASE("noiseless limit") {
    auto cfg = parse_scenario(kBase);
    // Without noise the residual error comes from the finite-sample
    // correlation between source waveforms, which shrinks like 1/sqrt(T).
    cfg.snr_sweep = {std::numeric_limits<double>::infinity()};
    cfg.grid_points = 4001;
    cfg.snapshots = 100000;
    cfg.trials = 3;
    const auto rep = run_rmse(cfg, 2);
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].failures == 0);
    CHECK(rep.points[0].rmse_sin < 1e-4);
  }
  SUBCASE("snapshot sweep is non-increasing and thread-independent") {
    auto cfg = parse_scenario(kBase);
    cfg.trials = 30;
    cfg.snapshot_sweep = {20, 200, 2000};
    const auto one = run_rmse(cfg, 1);
    const auto many = run_rmse(cfg, 3);
    REQUIRE(one.points.size() == 3);
    CHECK(one.kind == SweepKind::snapshots);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(one.points[i].rmse_sin == many.points[i].rmse_sin);
      CHECK(one.points[i].failures <= one.points[i].trials);
    }
    CHECK(one.points[1].rmse_sin < one.points[0].rmse_sin);
    CHECK(one.points[2].rmse_sin < one.points[1].rmse_sin);
  }
  SUBCASE("exactly one sweep") {
    auto cfg = parse_scenario(kBase);
    CHECK_THROWS_AS(run_rmse(cfg), ConfigError);
    cfg.snr_sweep = {0};
    cfg.snapshot_sweep = {10};
    CHECK_THROWS_AS(run_rmse(cfg), ConfigError);
  }
}
