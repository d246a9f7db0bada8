#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "format.hpp"
#include "params.hpp"
#include "rng.hpp"

namespace dronebs {

/// Matérn cluster process parameters.
struct ClusterConfig {
  double parent_density_per_m2 = 1e-7;
  double mean_users_per_cluster = 90.0;
  double cluster_radius_m = 700.0;

  void validate() const {
    if (!(parent_density_per_m2 > 0.0)) throw ConfigError("parent_density_per_m2: must be > 0");
    if (!(mean_users_per_cluster > 0.0)) throw ConfigError("mean_users_per_cluster: must be > 0");
    if (!(cluster_radius_m > 0.0)) throw ConfigError("cluster_radius_m: must be > 0");
  }
};

struct User {
  std::size_t id = 0;
  double x = 0.0;
  double y = 0.0;
  double rate_mbps = 0.0;
  double weight = 1.0;

  bool operator==(const User&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Mode { network_centric, user_centric };

inline std::string_view to_string(Mode m) {
  return m == Mode::network_centric ? "network_centric" : "user_centric";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "network_centric") return Mode::network_centric;
  if (s == "user_centric") return Mode::user_centric;
  throw ConfigError("mode: expected network_centric or user_centric, got '" + std::string(s) + "'");
}

/// A sampled population plus the bookkeeping needed to audit it.
struct Population {
  std::vector<User> users;
  std::vector<Point> parents;
  std::vector<std::size_t> parent_of;  // per user, index into parents
  std::uint64_t seed = 0;              // seed that produced this draw
  int resamples = 0;                   // empty draws skipped before it
};

/// Uniform point in a disk via radius = r * sqrt(u).
inline Point sample_in_disk(Rng& rng, Point center, double radius) {
  const double rho = radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  return {center.x + rho * std::cos(phi), center.y + rho * std::sin(phi)};
}

/// Daughters of one parent. Appends to `pop`; users are numbered in order.
inline void sample_cluster(Rng& rng, Point parent, const ClusterConfig& cfg,
                           const std::vector<double>& rate_set, Population& pop) {
  const std::size_t parent_index = pop.parents.size();
  pop.parents.push_back(parent);
  const std::uint64_t count = rng.poisson(cfg.mean_users_per_cluster);
  for (std::uint64_t k = 0; k < count; ++k) {
    const Point p = sample_in_disk(rng, parent, cfg.cluster_radius_m);
    const double rate = rate_set[rng.uniform_index(rate_set.size())];
    pop.users.push_back({pop.users.size(), p.x, p.y, rate, 1.0});
    pop.parent_of.push_back(parent_index);
  }
}

/// One draw of the cluster process, empty or not.
inline Population sample_users_once(const AreaBounds& bounds, const ClusterConfig& cfg,
                                    const std::vector<double>& rate_set, std::uint64_t seed) {
  Rng rng(seed);
  Population pop;
  pop.seed = seed;
  const std::uint64_t parents = rng.poisson(cfg.parent_density_per_m2 * bounds.area());
  for (std::uint64_t p = 0; p < parents; ++p) {
    const Point center{rng.uniform(bounds.x_min, bounds.x_max),
                       rng.uniform(bounds.y_min, bounds.y_max)};
    sample_cluster(rng, center, cfg, rate_set, pop);
  }
  return pop;
}

/// Matérn cluster population with rates drawn uniformly from `rate_set`.
/// Empty draws are rejected and redrawn from derived seeds; the count is
/// kept in Population::resamples.
inline Population sample_users(const AreaBounds& bounds, const ClusterConfig& cfg,
                               const std::vector<double>& rate_set, std::uint64_t seed) {
  if (rate_set.empty()) throw ConfigError("rate_set_mbps: must be non-empty");
  for (double r : rate_set)
    if (!(r > 0.0)) throw ConfigError("rate_set_mbps: rates must be > 0");
  bounds.validate();
  cfg.validate();
  std::uint64_t draw_seed = seed;
  for (int attempt = 0;; ++attempt) {
    Population pop = sample_users_once(bounds, cfg, rate_set, draw_seed);
    if (!pop.users.empty()) {
      pop.resamples = attempt;
      return pop;
    }
    if (attempt >= 10000) throw ModelError("cluster process produced no users in 10000 draws");
    draw_seed = derive_seed(seed, static_cast<std::uint64_t>(attempt) + 1);
  }
}

inline std::vector<User> assign_weights(std::vector<User> users, Mode mode) {
  for (auto& u : users) u.weight = mode == Mode::network_centric ? 1.0 : u.rate_mbps;
  return users;
}

/// Moves every user by exactly `distance_m` in an independent uniform
/// direction. Positions are not clipped to the area.
inline std::vector<User> displace_users(std::vector<User> users, double distance_m,
                                        std::uint64_t seed) {
  if (!(distance_m >= 0.0)) throw ConfigError("displacement must be >= 0");
  if (distance_m == 0.0) return users;
  Rng rng(seed);
  for (auto& u : users) {
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    u.x += distance_m * std::cos(phi);
    u.y += distance_m * std::sin(phi);
  }
  return users;
}

// ---- CSV ------------------------------------------------------------------

inline constexpr std::string_view kUsersCsvHeader = "id,x_m,y_m,rate_mbps,weight";

inline std::string users_to_csv(const std::vector<User>& users) {
  std::string out(kUsersCsvHeader);
  out += '\n';
  for (const auto& u : users) {
    out += std::to_string(u.id);
    out += ',';
    out += format_double(u.x);
    out += ',';
    out += format_double(u.y);
    out += ',';
    out += format_double(u.rate_mbps);
    out += ',';
    out += format_double(u.weight);
    out += '\n';
  }
  return out;
}

inline std::vector<User> users_from_csv(std::string_view text) {
  std::vector<User> users;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != kUsersCsvHeader)
    throw ConfigError("users csv: expected header '" + std::string(kUsersCsvHeader) + "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != 5)
      throw ConfigError("users csv line " + std::to_string(lineno) + ": expected 5 fields");
    User u;
    u.id = static_cast<std::size_t>(parse_double(fields[0], "id"));
    u.x = parse_double(fields[1], "x_m");
    u.y = parse_double(fields[2], "y_m");
    u.rate_mbps = parse_double(fields[3], "rate_mbps");
    u.weight = parse_double(fields[4], "weight");
    if (!(u.rate_mbps > 0.0) || !(u.weight > 0.0))
      throw ConfigError("users csv line " + std::to_string(lineno) +
                        ": rate_mbps and weight must be > 0");
    users.push_back(u);
  }
  return users;
}

inline std::vector<User> read_users_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open users file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return users_from_csv(ss.str());
}

}  // namespace dronebs
