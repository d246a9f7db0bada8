#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "channel.hpp"
#include "format.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "placement.hpp"
#include "rng.hpp"
#include "users.hpp"

namespace dronebs {

/// Scenario shared by every experiment: who the users are and how they
/// are generated per seed.
struct Scenario {
  SystemParams sys;
  EnvironmentParams env;
  ClusterConfig cluster;
  std::vector<double> rate_set_mbps{0.1, 0.5, 1.0, 1.5, 2.0};
};

struct SweepSpec {
  std::vector<double> backhaul_values_mbps;
  std::vector<std::uint64_t> seeds;
  Mode mode = Mode::network_centric;
};

struct RobustnessSpec {
  std::vector<double> displacement_values_m;
  std::vector<std::uint64_t> seeds;
  Mode mode = Mode::network_centric;
};

/// One raw measurement: the CSV row `seed,x_value,metric,value`.
struct Measurement {
  std::uint64_t seed = 0;
  double x_value = 0.0;
  std::string metric;
  double value = 0.0;
};

struct PointSummary {
  double x_value = 0.0;
  std::string metric;
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single value
  double min = 0.0;
  double max = 0.0;
};

struct ExperimentReport {
  std::string name;
  std::vector<Measurement> raw;
  std::vector<PointSummary> summary;
  nlohmann::ordered_json metadata;

  /// Summary entry for (metric, x), or nullptr.
  const PointSummary* find(std::string_view metric, double x) const {
    for (const auto& s : summary)
      if (s.metric == metric && s.x_value == x) return &s;
    return nullptr;
  }
  std::vector<double> values(std::string_view metric, double x) const {
    std::vector<double> out;
    for (const auto& m : raw)
      if (m.metric == metric && m.x_value == x) out.push_back(m.value);
    return out;
  }
};

namespace detail {

inline void validate_increasing(const std::vector<double>& v, const char* what, double lo) {
  if (v.empty()) throw ConfigError(std::string(what) + ": must be non-empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= lo)) throw ConfigError(std::string(what) + ": values out of range");
    if (i > 0 && !(v[i] > v[i - 1])) throw ConfigError(std::string(what) + ": must be strictly increasing");
  }
}

/// Summaries per (metric, x) in first-appearance order. Sums run in raw
/// order, which is fixed by (seed, point) indices, never by scheduling.
inline std::vector<PointSummary> summarize(const std::vector<Measurement>& raw) {
  std::vector<PointSummary> out;
  std::vector<std::vector<double>> samples;
  for (const auto& m : raw) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PointSummary& s) {
      return s.metric == m.metric && s.x_value == m.x_value;
    });
    if (it == out.end()) {
      out.push_back({m.x_value, m.metric});
      samples.emplace_back();
      it = out.end() - 1;
    }
    samples[static_cast<std::size_t>(it - out.begin())].push_back(m.value);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& v = samples[k];
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[k].count = v.size();
    out[k].mean = std::clamp(mean, *std::min_element(v.begin(), v.end()),
                             *std::max_element(v.begin(), v.end()));
    out[k].stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    out[k].min = *std::min_element(v.begin(), v.end());
    out[k].max = *std::max_element(v.begin(), v.end());
  }
  return out;
}

}  // namespace detail

/// Population for one seed with weights for `mode`.
inline Population scenario_population(const Scenario& sc, std::uint64_t seed, Mode mode) {
  Population pop = sample_users(sc.sys.bounds, sc.cluster, sc.rate_set_mbps, seed);
  pop.users = assign_weights(std::move(pop.users), mode);
  return pop;
}

/// Seed of the displacement directions for a population seed. Shared by
/// every displacement value so larger moves reuse the same headings.
inline std::uint64_t displacement_seed(std::uint64_t seed) {
  return derive_seed(seed, 0x6d6f76655f757372ULL);
}

// ---- rate CDF ---------------------------------------------------------------

/// Fraction of `rates` at or below each value of `rate_set` (sorted).
inline std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> rates,
                                                            std::vector<double> rate_set) {
  if (rates.empty()) throw ModelError("rate CDF undefined: no served users");
  std::sort(rate_set.begin(), rate_set.end());
  std::vector<std::pair<double, double>> cdf;
  for (double rho : rate_set) {
    const auto below = std::count_if(rates.begin(), rates.end(), [&](double r) { return r <= rho; });
    cdf.emplace_back(rho, static_cast<double>(below) / static_cast<double>(rates.size()));
  }
  return cdf;
}

inline std::vector<double> served_rates(const PlacementResult& result, std::span<const User> users) {
  if (result.selected.size() != users.size())
    throw ModelError("rate_cdf: result does not match users");
  std::vector<double> out;
  for (std::size_t i = 0; i < users.size(); ++i)
    if (result.selected[i]) out.push_back(users[i].rate_mbps);
  return out;
}

/// Empirical CDF of the served users' required rates over `rate_set`.
inline std::vector<std::pair<double, double>> rate_cdf(const PlacementResult& result,
                                                       std::span<const User> users,
                                                       const std::vector<double>& rate_set) {
  return empirical_cdf(served_rates(result, users), rate_set);
}

// ---- backhaul sweep ---------------------------------------------------------

/// Served users versus backhaul cap. Every cap sees the same population
/// for a given seed.
inline ExperimentReport backhaul_sweep(const SweepSpec& spec, const Scenario& sc,
                                       unsigned threads = 1) {
  detail::validate_increasing(spec.backhaul_values_mbps, "backhaul_values_mbps", 0.0);
  if (spec.seeds.empty()) throw ConfigError("seeds: must be non-empty");
  const std::size_t ns = spec.seeds.size(), nr = spec.backhaul_values_mbps.size();

  std::vector<Population> pops(ns);
  parallel_for(ns, threads, [&](std::size_t s) {
    pops[s] = scenario_population(sc, spec.seeds[s], spec.mode);
  });

  static constexpr const char* kMetrics[] = {"served_count", "objective", "sum_rate_mbps",
                                             "bandwidth_used_mhz", "altitude_m"};
  constexpr std::size_t kPer = std::size(kMetrics);
  std::vector<double> cells(ns * nr * kPer);
  parallel_for(ns * nr, threads, [&](std::size_t cell) {
    const std::size_t s = cell / nr, k = cell % nr;
    SystemParams sys = sc.sys;
    sys.backhaul_mbps = spec.backhaul_values_mbps[k];
    const PlacementResult r = optimal_placement(pops[s].users, sys, sc.env, 1);
    double* out = &cells[cell * kPer];
    out[0] = static_cast<double>(r.served_count);
    out[1] = r.objective;
    out[2] = r.sum_rate_mbps;
    out[3] = r.bandwidth_used_mhz;
    out[4] = r.placement.h;
  });

  ExperimentReport rep;
  rep.name = "sweep_backhaul";
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t k = 0; k < nr; ++k)
      for (std::size_t m = 0; m < kPer; ++m)
        rep.raw.push_back({spec.seeds[s], spec.backhaul_values_mbps[k], kMetrics[m],
                           cells[(s * nr + k) * kPer + m]});
  rep.summary = detail::summarize(rep.raw);
  rep.metadata["experiment"] = rep.name;
  rep.metadata["mode"] = to_string(spec.mode);
  rep.metadata["x_value"] = "backhaul_mbps";
  auto pm = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < ns; ++s)
    pm.push_back({{"seed", spec.seeds[s]},
                  {"population_seed", pops[s].seed},
                  {"resamples", pops[s].resamples},
                  {"users", pops[s].users.size()}});
  rep.metadata["populations"] = std::move(pm);
  return rep;
}

// ---- robustness -------------------------------------------------------------

struct DisplacementOutcome {
  std::size_t original = 0;
  std::size_t remaining = 0;
  std::size_t dropped_pathloss = 0;
  std::size_t dropped_resource = 0;

  std::size_t dropped() const { return dropped_pathloss + dropped_resource; }
  double dropped_percent() const {
    return original == 0 ? 0.0 : 100.0 * static_cast<double>(dropped()) / static_cast<double>(original);
  }
};

/// Keeps the drone and the served set fixed after users move. Served users
/// now beyond PL_max are dropped; if the survivors' bandwidth then exceeds
/// B, the largest-bandwidth survivors are dropped until it fits.
inline DisplacementOutcome evaluate_displacement(const PlacementResult& base,
                                                 std::span<const User> moved,
                                                 const SystemParams& sys,
                                                 const EnvironmentParams& env) {
  DisplacementOutcome out;
  struct Survivor {
    std::size_t index;
    double bandwidth;
  };
  std::vector<Survivor> survivors;
  for (std::size_t i = 0; i < moved.size(); ++i) {
    if (!base.selected[i]) continue;
    ++out.original;
    const double pl = user_pathloss_db(base.placement, moved[i], env, sys);
    if (!(pl <= sys.pl_max_db)) {
      ++out.dropped_pathloss;
      continue;
    }
    survivors.push_back(
        {i, channel::required_bandwidth(moved[i].rate_mbps, channel::spectral_efficiency(pl, sys))});
  }
  std::stable_sort(survivors.begin(), survivors.end(), [](const Survivor& a, const Survivor& b) {
    if (a.bandwidth != b.bandwidth) return a.bandwidth > b.bandwidth;
    return a.index > b.index;
  });
  double bw = 0.0;
  for (const auto& s : survivors) bw += s.bandwidth;
  std::size_t k = 0;
  while (bw > sys.bandwidth_mhz + kEps && k < survivors.size()) {
    bw -= survivors[k++].bandwidth;
    ++out.dropped_resource;
  }
  out.remaining = survivors.size() - k;
  return out;
}

/// Served users lost when everyone moves by each displacement while the
/// drone stays at its displacement-0 optimum.
inline ExperimentReport robustness_eval(const RobustnessSpec& spec, const Scenario& sc,
                                        unsigned threads = 1) {
  detail::validate_increasing(spec.displacement_values_m, "displacement_values_m", 0.0);
  if (spec.seeds.empty()) throw ConfigError("seeds: must be non-empty");
  const std::size_t ns = spec.seeds.size(), nd = spec.displacement_values_m.size();

  std::vector<Population> pops(ns);
  std::vector<std::vector<DisplacementOutcome>> outcomes(ns, std::vector<DisplacementOutcome>(nd));
  std::vector<Placement> placements(ns);
  parallel_for(ns, threads, [&](std::size_t s) {
    pops[s] = scenario_population(sc, spec.seeds[s], spec.mode);
    const PlacementResult base = optimal_placement(pops[s].users, sc.sys, sc.env, 1);
    placements[s] = base.placement;
    for (std::size_t k = 0; k < nd; ++k) {
      const auto moved = displace_users(pops[s].users, spec.displacement_values_m[k],
                                        displacement_seed(spec.seeds[s]));
      outcomes[s][k] = evaluate_displacement(base, moved, sc.sys, sc.env);
    }
  });

  ExperimentReport rep;
  rep.name = "robustness";
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t k = 0; k < nd; ++k) {
      const auto& o = outcomes[s][k];
      const double x = spec.displacement_values_m[k];
      const std::uint64_t seed = spec.seeds[s];
      rep.raw.push_back({seed, x, "original_served", static_cast<double>(o.original)});
      rep.raw.push_back({seed, x, "remaining_served", static_cast<double>(o.remaining)});
      rep.raw.push_back({seed, x, "dropped", static_cast<double>(o.dropped())});
      rep.raw.push_back({seed, x, "dropped_pathloss", static_cast<double>(o.dropped_pathloss)});
      rep.raw.push_back({seed, x, "dropped_resource", static_cast<double>(o.dropped_resource)});
      rep.raw.push_back({seed, x, "dropped_percent", o.dropped_percent()});
    }
  }
  rep.summary = detail::summarize(rep.raw);
  rep.metadata["experiment"] = rep.name;
  rep.metadata["mode"] = to_string(spec.mode);
  rep.metadata["x_value"] = "displacement_m";
  auto pm = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < ns; ++s)
    pm.push_back({{"seed", spec.seeds[s]},
                  {"population_seed", pops[s].seed},
                  {"resamples", pops[s].resamples},
                  {"users", pops[s].users.size()},
                  {"placement", {{"x_m", placements[s].x}, {"y_m", placements[s].y}, {"h_m", placements[s].h}}}});
  rep.metadata["populations"] = std::move(pm);
  return rep;
}

// ---- output -----------------------------------------------------------------

inline std::string report_to_csv(const ExperimentReport& rep) {
  std::string out = "seed,x_value,metric,value\n";
  for (const auto& m : rep.raw) {
    out += std::to_string(m.seed);
    out += ',';
    out += format_double(m.x_value);
    out += ',';
    out += m.metric;
    out += ',';
    out += format_double(m.value);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json summary_to_json(const ExperimentReport& rep) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : rep.summary)
    arr.push_back({{"x_value", s.x_value},
                   {"metric", s.metric},
                   {"count", s.count},
                   {"mean", s.mean},
                   {"stddev", s.stddev},
                   {"min", s.min},
                   {"max", s.max}});
  return arr;
}

}  // namespace dronebs
