#include "vsa/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace vsa {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown field");
}

template <typename T>
T get_field(const json& obj, const std::string& where, const char* key) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!obj.contains(key)) throw ConfigError(field + ": missing required field");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field + ": wrong type");
  }
}

template <typename T>
void get_optional(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type");
  }
}

double parse_snr(const json& value, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string() && (value.get<std::string>() == "inf" || value.get<std::string>() == "+inf"))
    return std::numeric_limits<double>::infinity();
  throw ConfigError(field + ": must be a number or \"inf\"");
}

GeometryParams parse_geometry(const json& g) {
  if (!g.is_object()) throw ConfigError("geometry: expected an object");
  const auto kind = get_field<std::string>(g, "geometry", "kind");
  if (kind == "coprime") {
    reject_unknown(g, "geometry", {"kind", "M", "N"});
    return GeometryParams::coprime(get_field<int>(g, "geometry", "M"), get_field<int>(g, "geometry", "N"));
  }
  if (kind == "nested") {
    reject_unknown(g, "geometry", {"kind", "N1", "N2"});
    return GeometryParams::nested(get_field<int>(g, "geometry", "N1"), get_field<int>(g, "geometry", "N2"));
  }
  throw ConfigError("geometry.kind: must be \"coprime\" or \"nested\"");
}

std::array<double, 2> parse_interval(const json& obj, const char* key) {
  const std::string field = std::string("sources.") + key;
  const auto v = get_field<std::vector<double>>(obj, "sources", key);
  if (v.size() != 2) throw ConfigError(field + ": expected [lo, hi]");
  return {v[0], v[1]};
}

std::variant<std::vector<Source>, SourceGenerator> parse_sources(const json& s) {
  if (s.is_array()) {
    std::vector<Source> out;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const std::string where = "sources[" + std::to_string(k) + "]";
      reject_unknown(s[k], where, {"sin_theta", "sin_phi", "power"});
      Source src;
      src.sin_theta = get_field<double>(s[k], where, "sin_theta");
      src.sin_phi = get_field<double>(s[k], where, "sin_phi");
      if (s[k].contains("power")) src.power = get_field<double>(s[k], where, "power");
      out.push_back(src);
    }
    return out;
  }
  reject_unknown(s, "sources", {"count", "sin_phi_interval", "sin_theta_interval", "pairing", "powers"});
  SourceGenerator gen;
  gen.count = get_field<int>(s, "sources", "count");
  gen.sin_phi_interval = parse_interval(s, "sin_phi_interval");
  gen.sin_theta_interval = parse_interval(s, "sin_theta_interval");
  if (s.contains("pairing")) {
    const auto& p = s.at("pairing");
    if (p.is_string()) {
      if (p.get<std::string>() != "joint-increasing")
        throw ConfigError("sources.pairing: must be \"joint-increasing\" or a permutation array");
    } else {
      gen.permutation = get_field<std::vector<int>>(s, "sources", "pairing");
    }
  }
  if (s.contains("powers")) gen.powers = get_field<std::vector<double>>(s, "sources", "powers");
  return gen;
}

std::vector<double> linspace(std::array<double, 2> iv, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = 0.5 * (iv[0] + iv[1]);
    return out;
  }
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = iv[0] + (iv[1] - iv[0]) * i / (n - 1);
  return out;
}

}  // namespace

int ScenarioConfig::num_sources() const {
  if (const auto* list = std::get_if<std::vector<Source>>(&sources)) return static_cast<int>(list->size());
  return std::get<SourceGenerator>(sources).count;
}

std::vector<Source> expand_sources(const ScenarioConfig& config) {
  if (const auto* list = std::get_if<std::vector<Source>>(&config.sources)) return *list;
  const auto& gen = std::get<SourceGenerator>(config.sources);
  if (gen.count < 1) throw ConfigError("sources.count: must be at least 1");
  const auto n = static_cast<std::size_t>(gen.count);
  if (!gen.permutation.empty()) {
    if (gen.permutation.size() != n) throw ConfigError("sources.pairing: permutation length must equal count");
    std::set<int> seen(gen.permutation.begin(), gen.permutation.end());
    if (seen.size() != n || *seen.begin() != 0 || *seen.rbegin() != gen.count - 1)
      throw ConfigError("sources.pairing: not a permutation of 0..count-1");
  }
  if (!gen.powers.empty() && gen.powers.size() != n)
    throw ConfigError("sources.powers: length must equal count");
  const auto phi = linspace(gen.sin_phi_interval, gen.count);
  const auto theta = linspace(gen.sin_theta_interval, gen.count);
  std::vector<Source> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto t = gen.permutation.empty() ? k : static_cast<std::size_t>(gen.permutation[k]);
    out[k] = Source{theta[t], phi[k], gen.powers.empty() ? 1.0 : gen.powers[k]};
  }
  return out;
}

void validate(const ScenarioConfig& config) {
  try {
    validate(config.geometry);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  const int k = config.num_sources();
  if (k < 1) throw ConfigError("sources: at least one source is required");
  const int limit = max_resolvable(config.geometry);
  if (k > limit)
    throw ConfigError("sources: K = " + std::to_string(k) + " exceeds the resolvable limit " + std::to_string(limit) +
                      " of " + config.geometry.describe());
  SourceSet(expand_sources(config), build_vshaped(config.geometry).omega);
  if (std::isnan(config.snr_db) || config.snr_db == -std::numeric_limits<double>::infinity())
    throw ConfigError("snr_db: must be a finite number or \"inf\"");
  if (config.snapshots < 1) throw ConfigError("snapshots: must be at least 1");
  if (config.grid_points < 3) throw ConfigError("grid_points: must be at least 3");
  if (config.trials < 1) throw ConfigError("trials: must be at least 1");
  for (double s : config.snr_sweep)
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
      throw ConfigError("snr_sweep: entries must be numbers or \"inf\"");
  for (int t : config.snapshot_sweep)
    if (t < 1) throw ConfigError("snapshot_sweep: entries must be at least 1");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"geometry", "sources", "snr_db", "snapshots", "seed", "grid_points", "trials",
                           "snr_sweep", "snapshot_sweep"});
  ScenarioConfig cfg;
  if (!doc.contains("geometry")) throw ConfigError("geometry: missing required field");
  if (!doc.contains("sources")) throw ConfigError("sources: missing required field");
  cfg.geometry = parse_geometry(doc.at("geometry"));
  cfg.sources = parse_sources(doc.at("sources"));
  if (doc.contains("snr_db")) cfg.snr_db = parse_snr(doc.at("snr_db"), "snr_db");
  get_optional(doc, "snapshots", cfg.snapshots);
  get_optional(doc, "seed", cfg.seed);
  get_optional(doc, "grid_points", cfg.grid_points);
  get_optional(doc, "trials", cfg.trials);
  if (doc.contains("snr_sweep")) {
    const auto& sw = doc.at("snr_sweep");
    if (!sw.is_array()) throw ConfigError("snr_sweep: expected an array");
    for (std::size_t i = 0; i < sw.size(); ++i)
      cfg.snr_sweep.push_back(parse_snr(sw[i], "snr_sweep[" + std::to_string(i) + "]"));
  }
  get_optional(doc, "snapshot_sweep", cfg.snapshot_sweep);
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string to_json(const ScenarioConfig& config) {
  auto snr = [](double v) -> json {
    if (std::isinf(v)) return "inf";
    return v;
  };
  json doc;
  if (config.geometry.kind == ArrayKind::coprime)
    doc["geometry"] = {{"kind", "coprime"}, {"M", config.geometry.first}, {"N", config.geometry.second}};
  else
    doc["geometry"] = {{"kind", "nested"}, {"N1", config.geometry.first}, {"N2", config.geometry.second}};
  if (const auto* list = std::get_if<std::vector<Source>>(&config.sources)) {
    json arr = json::array();
    for (const auto& s : *list) arr.push_back({{"sin_theta", s.sin_theta}, {"sin_phi", s.sin_phi}, {"power", s.power}});
    doc["sources"] = arr;
  } else {
    const auto& g = std::get<SourceGenerator>(config.sources);
    json gen = {{"count", g.count}, {"sin_phi_interval", g.sin_phi_interval}, {"sin_theta_interval", g.sin_theta_interval}};
    if (g.permutation.empty())
      gen["pairing"] = "joint-increasing";
    else
      gen["pairing"] = g.permutation;
    if (!g.powers.empty()) gen["powers"] = g.powers;
    doc["sources"] = gen;
  }
  doc["snr_db"] = snr(config.snr_db);
  doc["snapshots"] = config.snapshots;
  doc["seed"] = config.seed;
  doc["grid_points"] = config.grid_points;
  doc["trials"] = config.trials;
  if (!config.snr_sweep.empty()) {
    json arr = json::array();
    for (double s : config.snr_sweep) arr.push_back(snr(s));
    doc["snr_sweep"] = arr;
  }
  if (!config.snapshot_sweep.empty()) doc["snapshot_sweep"] = config.snapshot_sweep;
  return doc.dump(2);
}

}  // namespace vsa
