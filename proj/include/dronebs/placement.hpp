#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "association.hpp"
#include "channel.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "users.hpp"

namespace dronebs {

struct Placement {
  double x = 0.0;
  double y = 0.0;
  double h = 0.0;

  bool operator==(const Placement&) const = default;
};

struct PlacementResult {
  Placement placement;
  std::vector<bool> selected;
  double objective = 0.0;
  std::size_t served_count = 0;
  double sum_rate_mbps = 0.0;
  double bandwidth_used_mhz = 0.0;
  std::size_t candidates_evaluated = 0;
  std::uint64_t nodes_explored = 0;
};

/// Lattice points of [lo, hi] at `step`, always including both ends. When
/// the step is at least the whole extent only `lo` is kept.
inline std::vector<double> grid_axis(double lo, double hi, double step) {
  std::vector<double> axis;
  if (step >= hi - lo) {
    axis.push_back(lo);
    return axis;
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) axis.push_back(lo + static_cast<double>(k) * step);
  if (axis.back() < hi - 1e-9) axis.push_back(hi);
  else axis.back() = hi;
  return axis;
}

/// Candidate positions ordered x-major, then y, then altitude ascending.
inline std::vector<Placement> candidate_grid(const SystemParams& sys) {
  sys.validate();
  const auto xs = grid_axis(sys.bounds.x_min, sys.bounds.x_max, sys.grid_step_m);
  const auto ys = grid_axis(sys.bounds.y_min, sys.bounds.y_max, sys.grid_step_m);
  const auto hs = grid_axis(sys.h_min_m, sys.h_max_m, sys.grid_step_m);
  std::vector<Placement> grid;
  grid.reserve(xs.size() * ys.size() * hs.size());
  for (double x : xs)
    for (double y : ys)
      for (double h : hs) grid.push_back({x, y, h});
  return grid;
}

inline double user_pathloss_db(const Placement& p, const User& u, const EnvironmentParams& env,
                               const SystemParams& sys) {
  const channel::LinkGeometry g(std::hypot(u.x - p.x, u.y - p.y), p.h);
  return channel::mean_pathloss(g, env, sys.carrier_hz);
}

/// Horizontal reach at altitude h: largest r with PL(r) <= PL_max, or a
/// negative value when even r = 0 is out of budget. Pathloss grows with r
/// at fixed altitude, so bisection applies.
inline double coverage_radius_m(double h, const EnvironmentParams& env, const SystemParams& sys) {
  auto pl = [&](double r) {
    return channel::mean_pathloss(channel::LinkGeometry(r, h), env, sys.carrier_hz);
  };
  if (pl(0.0) > sys.pl_max_db) return -1.0;
  double lo = 0.0, hi = 1000.0;
  while (pl(hi) <= sys.pl_max_db) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) return hi;
  }
  for (int it = 0; it < 100 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pl(mid) <= sys.pl_max_db ? lo : hi) = mid;
  }
  return hi;
}

/// Per-position problem: the users in pathloss budget with their
/// bandwidth demand b_i = r_i / zeta_i.
struct PositionInstance {
  SelectionInstance inst;
  std::vector<std::size_t> user_index;  // inst item -> position in users
};

inline PositionInstance build_position_instance(const Placement& p, std::span<const User> users,
                                                const SystemParams& sys,
                                                const EnvironmentParams& env,
                                                double reach_m = std::numeric_limits<double>::infinity()) {
  PositionInstance out;
  out.inst.backhaul_cap = sys.backhaul_mbps;
  out.inst.bandwidth_cap = sys.bandwidth_mhz;
  if (reach_m < 0.0) return out;
  // Prefilter with a 1 m margin; membership is decided by the exact pathloss.
  const double reach2 = (reach_m + 1.0) * (reach_m + 1.0);
  for (std::size_t i = 0; i < users.size(); ++i) {
    const User& u = users[i];
    const double dx = u.x - p.x, dy = u.y - p.y;
    if (dx * dx + dy * dy > reach2) continue;
    const double pl = user_pathloss_db(p, u, env, sys);
    if (!(pl <= sys.pl_max_db)) continue;
    const double zeta = channel::spectral_efficiency(pl, sys);
    if (!(zeta > 0.0)) continue;  // unserveable, excluded
    out.inst.weights.push_back(u.weight);
    out.inst.rates.push_back(u.rate_mbps);
    out.inst.bandwidths.push_back(channel::required_bandwidth(u.rate_mbps, zeta));
    out.user_index.push_back(i);
  }
  return out;
}

/// Exact user selection at a fixed drone position; `selected` spans all users.
inline SelectionResult evaluate_position(const Placement& p, std::span<const User> users,
                                         const SystemParams& sys, const EnvironmentParams& env) {
  const PositionInstance pi = build_position_instance(p, users, sys, env);
  SelectionResult local = solve_bnb(pi.inst);
  SelectionResult out;
  out.selected.assign(users.size(), false);
  for (std::size_t k = 0; k < pi.user_index.size(); ++k)
    if (local.selected[k]) out.selected[pi.user_index[k]] = true;
  out.objective = local.objective;
  out.rate_used = local.rate_used;
  out.bandwidth_used = local.bandwidth_used;
  out.nodes_explored = local.nodes_explored;
  return out;
}

/// Exhaustive grid search. Returns the first candidate in scan order that
/// attains the maximum objective; the answer does not depend on `threads`.
inline PlacementResult optimal_placement(std::span<const User> users, const SystemParams& sys,
                                         const EnvironmentParams& env, unsigned threads = 1) {
  sys.validate();
  env.validate();
  if (users.empty()) throw ModelError("optimal_placement: no users");
  const std::vector<Placement> grid = candidate_grid(sys);
  const std::vector<double> hs = grid_axis(sys.h_min_m, sys.h_max_m, sys.grid_step_m);
  std::vector<double> reach(hs.size());
  for (std::size_t k = 0; k < hs.size(); ++k) reach[k] = coverage_radius_m(hs[k], env, sys);

  struct Best {
    double objective = -1.0;
    std::size_t index = std::numeric_limits<std::size_t>::max();
  };
  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
  std::vector<Best> chunk_best(chunks);
  // Shared lower bound on the optimum. It only prunes candidates whose
  // upper bound is strictly below it, which can never be the answer.
  std::atomic<double> floor_value{0.0};

  parallel_for(chunks, threads, [&](std::size_t c) {
    Best best;
    const std::size_t end = std::min(grid.size(), (c + 1) * kChunk);
    for (std::size_t g = c * kChunk; g < end; ++g) {
      const Placement& p = grid[g];
      const PositionInstance pi =
          build_position_instance(p, users, sys, env, reach[g % hs.size()]);
      const double incumbent = std::max(best.objective, floor_value.load());
      double cheap = 0.0;
      for (double w : pi.inst.weights) cheap += w;
      if (cheap < incumbent - kEps) continue;
      if (!pi.inst.weights.empty() &&
          upper_bound(pi.inst, PartialAssignment(pi.inst.size(), Fix::free)) < incumbent - kEps)
        continue;
      const double v = optimal_value(pi.inst, best.objective);
      if (v > best.objective + kEps) {
        best = {v, g};
        double seen = floor_value.load();
        while (v > seen && !floor_value.compare_exchange_weak(seen, v)) {
        }
      }
    }
    chunk_best[c] = best;
  });

  Best best;
  for (const Best& b : chunk_best)
    if (b.objective > best.objective + kEps) best = b;

  PlacementResult res;
  res.placement = grid[best.index];
  const SelectionResult sel = evaluate_position(res.placement, users, sys, env);
  res.selected = sel.selected;
  res.objective = sel.objective;
  res.bandwidth_used_mhz = sel.bandwidth_used;
  res.nodes_explored = sel.nodes_explored;
  res.candidates_evaluated = grid.size();
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!res.selected[i]) continue;
    ++res.served_count;
    res.sum_rate_mbps += users[i].rate_mbps;
  }
  return res;
}

/// Post-hoc audit of a result against the users it was computed for:
/// pathloss budget, both capacities, and objective consistency.
inline void verify_placement(const PlacementResult& res, std::span<const User> users,
                             const SystemParams& sys, const EnvironmentParams& env) {
  if (res.selected.size() != users.size()) throw ModelError("verify: selection size mismatch");
  double obj = 0.0, rate = 0.0, bw = 0.0;
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!res.selected[i]) continue;
    const double pl = user_pathloss_db(res.placement, users[i], env, sys);
    if (!(pl <= sys.pl_max_db))
      throw ModelError("verify: served user " + std::to_string(users[i].id) + " exceeds PL_max");
    obj += users[i].weight;
    rate += users[i].rate_mbps;
    bw += channel::required_bandwidth(users[i].rate_mbps, channel::spectral_efficiency(pl, sys));
  }
  if (rate > sys.backhaul_mbps + kEps) throw ModelError("verify: backhaul cap exceeded");
  if (bw > sys.bandwidth_mhz + kEps) throw ModelError("verify: bandwidth cap exceeded");
  if (std::abs(obj - res.objective) > 1e-9 * std::max(1.0, obj))
    throw ModelError("verify: objective inconsistent with selection");
}

inline nlohmann::ordered_json to_json(const PlacementResult& res, std::span<const User> users) {
  nlohmann::ordered_json j;
  j["placement"] = {{"x_m", res.placement.x}, {"y_m", res.placement.y}, {"h_m", res.placement.h}};
  j["objective"] = res.objective;
  j["served_count"] = res.served_count;
  j["sum_rate_mbps"] = res.sum_rate_mbps;
  j["bandwidth_used_mhz"] = res.bandwidth_used_mhz;
  auto ids = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < users.size(); ++i)
    if (res.selected[i]) ids.push_back(users[i].id);
  j["served_user_ids"] = std::move(ids);
  j["diagnostics"] = {{"candidates_evaluated", res.candidates_evaluated},
                      {"nodes_explored", res.nodes_explored}};
  return j;
}

}  // namespace dronebs
