#pragma once

// Scenario configuration: JSON parsing with strict field checking, and
// expansion of source generators into explicit source lists.

#include "vsa/geometry.hpp"
#include "vsa/signal.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace vsa {

/// K sources equally spaced over the sin(phi) and sin(theta) intervals.
/// Source k takes the k-th sin(phi) value and the permutation[k]-th
/// sin(theta) value; an empty permutation pairs them jointly increasing.
struct SourceGenerator {
  int count = 0;
  std::array<double, 2> sin_phi_interval{0.0, 0.0};
  std::array<double, 2> sin_theta_interval{0.0, 0.0};
  std::vector<int> permutation;
  std::vector<double> powers;  // empty: unit power; otherwise one per source
};

struct ScenarioConfig {
  GeometryParams geometry;
  std::variant<std::vector<Source>, SourceGenerator> sources;
  double snr_db = 0.0;
  int snapshots = 1000;
  std::uint64_t seed = 1;
  int grid_points = 4001;
  int trials = 100;
  std::vector<double> snr_sweep;
  std::vector<int> snapshot_sweep;

  int num_sources() const;
};

/// Explicit sources of a configuration, generator expanded.
std::vector<Source> expand_sources(const ScenarioConfig& config);

/// Full validation; throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

/// Parses JSON text. Unknown fields are rejected. Throws ConfigError.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

std::string to_json(const ScenarioConfig& config);

}  // namespace vsa
