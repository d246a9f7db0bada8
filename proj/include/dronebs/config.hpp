#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "experiments.hpp"
#include "format.hpp"
#include "json.hpp"
#include "params.hpp"
#include "users.hpp"

namespace dronebs {

/// Everything a CLI run needs. Defaults reproduce the urban environment
/// and the reference simulation parameters.
struct RunConfig {
  std::string environment = "urban";
  Scenario scenario;
  Mode mode = Mode::network_centric;
  std::vector<std::uint64_t> seeds = default_seeds();
  std::vector<double> backhaul_values_mbps = default_backhaul_values();
  std::vector<double> displacement_values_m{0.0, 25.0, 50.0, 100.0, 150.0, 200.0};
  std::string users_csv;  // optional replayed population for `place`

  static std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> s;
    for (std::uint64_t i = 1; i <= 20; ++i) s.push_back(i);
    return s;
  }
  static std::vector<double> default_backhaul_values() {
    std::vector<double> v;
    for (int r = 10; r <= 200; r += 10) v.push_back(r);
    return v;
  }

  void validate() const {
    scenario.env.validate();
    scenario.sys.validate();
    scenario.cluster.validate();
    if (scenario.rate_set_mbps.empty()) throw ConfigError("rate_set_mbps: must be non-empty");
    for (double r : scenario.rate_set_mbps)
      if (!(r > 0.0)) throw ConfigError("rate_set_mbps: rates must be > 0");
    if (seeds.empty()) throw ConfigError("seeds: must be non-empty");
    detail::validate_increasing(backhaul_values_mbps, "backhaul_values_mbps", 0.0);
    if (backhaul_values_mbps.front() <= 0.0) throw ConfigError("backhaul_values_mbps: values must be > 0");
    detail::validate_increasing(displacement_values_m, "displacement_values_m", 0.0);
  }
};

namespace detail {

inline EnvironmentParams environment_preset(const std::string& name) {
  if (name == "urban") return EnvironmentParams::urban();
  throw ConfigError("environment: unknown preset '" + name + "' (known: urban)");
}

inline double number_at(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key + ": expected a number");
  return v.get<double>();
}

inline std::vector<double> numbers_at(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number_at(e, key));
  return out;
}

inline std::vector<std::uint64_t> seeds_at(const nlohmann::json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key + ": expected an array of non-negative integers");
  std::vector<std::uint64_t> out;
  for (const auto& e : v) {
    if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0))
      throw ConfigError(key + ": expected an array of non-negative integers");
    out.push_back(e.get<std::uint64_t>());
  }
  return out;
}

inline std::string string_at(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + ": expected a string");
  return v.get<std::string>();
}

/// Applies one key. Unknown keys are rejected by name.
inline void apply_key(RunConfig& c, const std::string& key, const nlohmann::json& v) {
  auto& sys = c.scenario.sys;
  auto& env = c.scenario.env;
  auto& cl = c.scenario.cluster;
  if (key == "environment") {
    c.environment = string_at(v, key);
    env = environment_preset(c.environment);
  } else if (key == "a") env.a = number_at(v, key);
  else if (key == "b") env.b = number_at(v, key);
  else if (key == "eta_los_db") env.eta_los_db = number_at(v, key);
  else if (key == "eta_nlos_db") env.eta_nlos_db = number_at(v, key);
  else if (key == "carrier_hz") sys.carrier_hz = number_at(v, key);
  else if (key == "tx_power_w") sys.tx_power_w = number_at(v, key);
  else if (key == "bandwidth_mhz") sys.bandwidth_mhz = number_at(v, key);
  else if (key == "backhaul_mbps") sys.backhaul_mbps = number_at(v, key);
  else if (key == "pl_max_db") sys.pl_max_db = number_at(v, key);
  else if (key == "noise_density_dbm_hz") sys.noise_density_dbm_hz = number_at(v, key);
  else if (key == "noise_figure_db") sys.noise_figure_db = number_at(v, key);
  else if (key == "x_min_m") sys.bounds.x_min = number_at(v, key);
  else if (key == "x_max_m") sys.bounds.x_max = number_at(v, key);
  else if (key == "y_min_m") sys.bounds.y_min = number_at(v, key);
  else if (key == "y_max_m") sys.bounds.y_max = number_at(v, key);
  else if (key == "h_min_m") sys.h_min_m = number_at(v, key);
  else if (key == "h_max_m") sys.h_max_m = number_at(v, key);
  else if (key == "grid_step_m") sys.grid_step_m = number_at(v, key);
  else if (key == "parent_density_per_m2") cl.parent_density_per_m2 = number_at(v, key);
  else if (key == "mean_users_per_cluster") cl.mean_users_per_cluster = number_at(v, key);
  else if (key == "cluster_radius_m") cl.cluster_radius_m = number_at(v, key);
  else if (key == "rate_set_mbps") c.scenario.rate_set_mbps = numbers_at(v, key);
  else if (key == "mode") c.mode = parse_mode(string_at(v, key));
  else if (key == "seeds") c.seeds = seeds_at(v, key);
  else if (key == "backhaul_values_mbps") c.backhaul_values_mbps = numbers_at(v, key);
  else if (key == "displacement_values_m") c.displacement_values_m = numbers_at(v, key);
  else if (key == "users_csv") c.users_csv = string_at(v, key);
  else throw ConfigError(key + ": unknown configuration key");
}

inline void apply_object(RunConfig& c, const nlohmann::json& obj) {
  if (!obj.is_object()) throw ConfigError("config: top level must be a JSON object");
  // The preset goes first so explicit constants in the same file win.
  if (obj.contains("environment")) apply_key(c, "environment", obj.at("environment"));
  for (const auto& [key, value] : obj.items())
    if (key != "environment") apply_key(c, key, value);
}

}  // namespace detail

/// Full resolved configuration; reloading it yields an equivalent RunConfig.
inline nlohmann::ordered_json to_json(const RunConfig& c) {
  const auto& sys = c.scenario.sys;
  const auto& env = c.scenario.env;
  const auto& cl = c.scenario.cluster;
  nlohmann::ordered_json j;
  j["environment"] = c.environment;
  j["a"] = env.a;
  j["b"] = env.b;
  j["eta_los_db"] = env.eta_los_db;
  j["eta_nlos_db"] = env.eta_nlos_db;
  j["carrier_hz"] = sys.carrier_hz;
  j["tx_power_w"] = sys.tx_power_w;
  j["bandwidth_mhz"] = sys.bandwidth_mhz;
  j["backhaul_mbps"] = sys.backhaul_mbps;
  j["pl_max_db"] = sys.pl_max_db;
  j["noise_density_dbm_hz"] = sys.noise_density_dbm_hz;
  j["noise_figure_db"] = sys.noise_figure_db;
  j["x_min_m"] = sys.bounds.x_min;
  j["x_max_m"] = sys.bounds.x_max;
  j["y_min_m"] = sys.bounds.y_min;
  j["y_max_m"] = sys.bounds.y_max;
  j["h_min_m"] = sys.h_min_m;
  j["h_max_m"] = sys.h_max_m;
  j["grid_step_m"] = sys.grid_step_m;
  j["parent_density_per_m2"] = cl.parent_density_per_m2;
  j["mean_users_per_cluster"] = cl.mean_users_per_cluster;
  j["cluster_radius_m"] = cl.cluster_radius_m;
  j["rate_set_mbps"] = c.scenario.rate_set_mbps;
  j["mode"] = to_string(c.mode);
  j["seeds"] = c.seeds;
  j["backhaul_values_mbps"] = c.backhaul_values_mbps;
  j["displacement_values_m"] = c.displacement_values_m;
  j["users_csv"] = c.users_csv;
  return j;
}

/// Stable hash of the resolved configuration.
inline std::string config_hash(const RunConfig& c) { return hex64(fnv1a(to_json(c).dump())); }

/// Parses a `key=value` override. The value is read as JSON when it parses
/// (numbers, arrays) and as a bare string otherwise.
inline std::pair<std::string, nlohmann::json> parse_override(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + kv + "': expected key=value");
  const std::string key(trim(std::string_view(kv).substr(0, eq)));
  const std::string text(trim(std::string_view(kv).substr(eq + 1)));
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  return {key, value};
}

/// Defaults, then the JSON document `text`, then `overrides`; validated.
inline RunConfig config_from_string(const std::string& text,
                                    const std::vector<std::string>& overrides = {}) {
  RunConfig c;
  if (!trim(text).empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    detail::apply_object(c, doc);
  }
  nlohmann::json ov = nlohmann::json::object();
  for (const auto& kv : overrides) {
    auto [key, value] = parse_override(kv);
    ov[key] = value;
  }
  detail::apply_object(c, ov);
  c.validate();
  return c;
}

/// Loads `path` (empty path = defaults only) and applies overrides.
inline RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return config_from_string(text, overrides);
}

}  // namespace dronebs
