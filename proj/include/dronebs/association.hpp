#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace dronebs {

/// Absolute tolerance on capacities and objective comparisons.
inline constexpr double kEps = 1e-9;

/// Weighted 0/1 user selection under a backhaul-rate cap and a bandwidth
/// cap. Rates in Mbps, bandwidths in MHz. Only users that already pass the
/// pathloss test belong here.
struct SelectionInstance {
  std::vector<double> weights;
  std::vector<double> rates;
  std::vector<double> bandwidths;
  double backhaul_cap = 0.0;
  double bandwidth_cap = 0.0;

  std::size_t size() const { return weights.size(); }

  void validate() const {
    if (rates.size() != weights.size() || bandwidths.size() != weights.size())
      throw ModelError("selection instance: weights, rates and bandwidths differ in length");
    for (std::size_t i = 0; i < size(); ++i) {
      if (!(weights[i] > 0.0)) throw ModelError("selection instance: weights must be > 0");
      if (!(rates[i] >= 0.0) || !(bandwidths[i] >= 0.0))
        throw ModelError("selection instance: rates and bandwidths must be >= 0");
    }
    if (!(backhaul_cap >= 0.0) || !(bandwidth_cap >= 0.0))
      throw ModelError("selection instance: caps must be >= 0");
  }
};

struct SelectionResult {
  std::vector<bool> selected;
  double objective = 0.0;
  double rate_used = 0.0;
  double bandwidth_used = 0.0;
  std::uint64_t nodes_explored = 0;
};

enum class Fix : std::uint8_t { free, in, out };
using PartialAssignment = std::vector<Fix>;

namespace detail {

inline bool all_integral(const std::vector<double>& w) {
  return std::all_of(w.begin(), w.end(), [](double v) { return v == std::floor(v); });
}

/// Fills objective and usage from the indicator vector, summing in index
/// order so equal selections always report bit-identical totals.
inline void tally(const SelectionInstance& inst, SelectionResult& res) {
  res.objective = res.rate_used = res.bandwidth_used = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!res.selected[i]) continue;
    res.objective += inst.weights[i];
    res.rate_used += inst.rates[i];
    res.bandwidth_used += inst.bandwidths[i];
  }
}

/// Fractional-knapsack bounds for both constraints, over items kept in
/// ratio order so each evaluation is a single linear pass.
class Bounder {
public:
  explicit Bounder(const SelectionInstance& inst)
      : inst_(inst),
        by_rate_(ratio_order(inst, inst.rates)),
        by_bandwidth_(ratio_order(inst, inst.bandwidths)),
        integral_(all_integral(inst.weights)) {}

  /// Bound on the best completion given the fixed prefix state.
  /// `fixed_weight` and the residuals describe the items already fixed in.
  double bound(const PartialAssignment& fix, double fixed_weight, double rate_left,
               double bw_left) const {
    if (rate_left < -kEps || bw_left < -kEps) return -std::numeric_limits<double>::infinity();
    const double b1 = fractional(by_rate_, inst_.rates, rate_left, fix, rate_left, bw_left);
    const double b2 = fractional(by_bandwidth_, inst_.bandwidths, bw_left, fix, rate_left, bw_left);
    double b = fixed_weight + std::min(b1, b2);
    if (integral_) b = std::floor(b + kEps);
    return b;
  }

private:
  static std::vector<std::size_t> ratio_order(const SelectionInstance& inst,
                                              const std::vector<double>& cost) {
    std::vector<std::size_t> idx(inst.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Zero-cost items first; otherwise by weight/cost descending, index ascending.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      const bool zi = cost[i] == 0.0, zj = cost[j] == 0.0;
      if (zi != zj) return zi;
      if (zi) return false;
      return inst.weights[i] * cost[j] > inst.weights[j] * cost[i];
    });
    return idx;
  }

  double fractional(const std::vector<std::size_t>& order, const std::vector<double>& cost,
                    double cap, const PartialAssignment& fix, double rate_left,
                    double bw_left) const {
    cap = std::max(cap, 0.0);
    double total = 0.0;
    for (std::size_t i : order) {
      if (fix[i] != Fix::free) continue;
      // Items that cannot fit alone in either residual are excluded outright.
      if (inst_.rates[i] > rate_left + kEps || inst_.bandwidths[i] > bw_left + kEps) continue;
      const double c = cost[i];
      if (c <= cap) {
        total += inst_.weights[i];
        cap -= c;
      } else {
        total += inst_.weights[i] * (cap / c);
        break;
      }
    }
    return total;
  }

  const SelectionInstance& inst_;
  std::vector<std::size_t> by_rate_;
  std::vector<std::size_t> by_bandwidth_;
  bool integral_;
};

struct FixedState {
  double weight = 0.0;
  double rate_left = 0.0;
  double bw_left = 0.0;
};

inline FixedState fixed_state(const SelectionInstance& inst, const PartialAssignment& fix) {
  FixedState s{0.0, inst.backhaul_cap, inst.bandwidth_cap};
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (fix[i] != Fix::in) continue;
    s.weight += inst.weights[i];
    s.rate_left -= inst.rates[i];
    s.bw_left -= inst.bandwidths[i];
  }
  return s;
}

/// Depth-first branch-and-bound over the items in `order`, include before
/// exclude; items outside `order` keep their value in the initial
/// assignment. `maximize` finds the best value strictly above a floor;
/// `find_target` stops at the first leaf reaching a target value.
///
/// With class dominance on, users of equal weight and rate are only taken
/// as a prefix of their bandwidth-ascending branching order: a user may be
/// included only if its cheaper peer earlier in `order` is included. Any
/// selection can be rewritten into that form without losing value, so the
/// optimum survives but the tie-breaking among optima does not.
class Search {
public:
  Search(const SelectionInstance& inst, std::vector<std::size_t> order, PartialAssignment initial,
         bool class_dominance)
      : inst_(inst), bounder_(inst), order_(std::move(order)), fix_(std::move(initial)) {
    if (class_dominance) build_classes();
  }

  /// Best value strictly above `floor` (by more than kEps), or `floor`
  /// itself when nothing beats it. `argmax()` holds the witness if any.
  double maximize(double floor) {
    target_mode_ = false;
    best_ = floor;
    found_ = false;
    descend(0, fixed_state(inst_, fix_));
    return best_;
  }

  bool find_target(double target) {
    target_mode_ = true;
    target_ = target;
    found_ = false;
    descend(0, fixed_state(inst_, fix_));
    return found_;
  }

  const std::vector<bool>& argmax() const { return found_vec_; }
  bool found() const { return found_; }
  std::uint64_t nodes() const { return nodes_; }

private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void build_classes() {
    prev_in_class_.assign(inst_.size(), kNone);
    std::vector<std::size_t> by_key(order_);
    std::stable_sort(by_key.begin(), by_key.end(), [&](std::size_t i, std::size_t j) {
      if (inst_.weights[i] != inst_.weights[j]) return inst_.weights[i] < inst_.weights[j];
      return inst_.rates[i] < inst_.rates[j];
    });
    std::vector<std::size_t> rank(inst_.size(), kNone);
    for (std::size_t k = 0; k < order_.size(); ++k) rank[order_[k]] = k;
    for (std::size_t k = 1; k < by_key.size(); ++k) {
      const std::size_t i = by_key[k - 1], j = by_key[k];
      if (inst_.weights[i] != inst_.weights[j] || inst_.rates[i] != inst_.rates[j]) continue;
      if (rank[i] < rank[j] && inst_.bandwidths[i] <= inst_.bandwidths[j]) prev_in_class_[j] = i;
    }
  }

  void record_leaf() {
    found_ = true;
    found_vec_.assign(fix_.size(), false);
    for (std::size_t i = 0; i < fix_.size(); ++i) found_vec_[i] = fix_[i] == Fix::in;
  }

  void descend(std::size_t depth, FixedState s) {
    ++nodes_;
    if (depth == order_.size()) {
      if (target_mode_) {
        if (s.weight >= target_ - kEps) record_leaf();
      } else if (s.weight > best_ + kEps) {
        best_ = s.weight;
        record_leaf();
      }
      return;
    }
    const double ub = bounder_.bound(fix_, s.weight, s.rate_left, s.bw_left);
    if (target_mode_ ? ub < target_ - kEps : ub <= best_ + kEps) return;

    const std::size_t i = order_[depth];
    const bool dominated = !prev_in_class_.empty() && prev_in_class_[i] != kNone &&
                           fix_[prev_in_class_[i]] == Fix::out;
    if (!dominated && inst_.rates[i] <= s.rate_left + kEps &&
        inst_.bandwidths[i] <= s.bw_left + kEps) {
      fix_[i] = Fix::in;
      descend(depth + 1, {s.weight + inst_.weights[i], s.rate_left - inst_.rates[i],
                          s.bw_left - inst_.bandwidths[i]});
      if (target_mode_ && found_) {
        fix_[i] = Fix::free;
        return;
      }
    }
    fix_[i] = Fix::out;
    descend(depth + 1, s);
    fix_[i] = Fix::free;
  }

  const SelectionInstance& inst_;
  Bounder bounder_;
  std::vector<std::size_t> order_;
  PartialAssignment fix_;
  std::vector<std::size_t> prev_in_class_;
  bool target_mode_ = false;
  double best_ = 0.0;
  double target_ = 0.0;
  bool found_ = false;
  std::vector<bool> found_vec_;
  std::uint64_t nodes_ = 0;
};

/// Branching order: weight per combined normalized resource, descending.
inline std::vector<std::size_t> branching_order(const SelectionInstance& inst) {
  const double rcap = inst.backhaul_cap > 0.0 ? inst.backhaul_cap : 1.0;
  const double bcap = inst.bandwidth_cap > 0.0 ? inst.bandwidth_cap : 1.0;
  std::vector<double> load(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i)
    load[i] = inst.rates[i] / rcap + inst.bandwidths[i] / bcap;
  std::vector<std::size_t> idx(inst.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return inst.weights[i] * load[j] > inst.weights[j] * load[i];
  });
  return idx;
}

}  // namespace detail

/// Admissible bound on the best feasible completion of `fixed`: the
/// tighter of the two single-constraint fractional relaxations, floored
/// when every weight is integral. Exact at complete assignments.
inline double upper_bound(const SelectionInstance& inst, const PartialAssignment& fixed) {
  inst.validate();
  if (fixed.size() != inst.size()) throw ModelError("upper_bound: assignment size mismatch");
  const detail::FixedState s = detail::fixed_state(inst, fixed);
  return detail::Bounder(inst).bound(fixed, s.weight, s.rate_left, s.bw_left);
}

/// Optimal objective only, or `floor` when no selection beats it by more
/// than kEps. Cheaper than solve_bnb: no tie-breaking work.
inline double optimal_value(const SelectionInstance& inst, double floor = 0.0,
                            std::uint64_t* nodes = nullptr) {
  if (inst.size() == 0) return std::max(floor, 0.0);
  detail::Search search(inst, detail::branching_order(inst),
                        PartialAssignment(inst.size(), Fix::free), true);
  const double v = search.maximize(floor);
  if (nodes) *nodes += search.nodes();
  return v;
}

/// Exact solver. Among equally good selections it returns the
/// lexicographically preferred one (user 0 included if possible, then
/// user 1, ...).
///
/// A dominance-pruned search finds the optimal value and a witness. Users
/// are then fixed in index order: kept in when the witness serves them,
/// otherwise kept in only if some completion still reaches the optimum
/// (that completion becomes the new witness).
inline SelectionResult solve_bnb(const SelectionInstance& inst) {
  inst.validate();
  const std::size_t n = inst.size();
  SelectionResult res;
  res.selected.assign(n, false);
  if (n == 0) return res;

  const auto order = detail::branching_order(inst);
  detail::Search value_search(inst, order, PartialAssignment(n, Fix::free), true);
  const double best = value_search.maximize(0.0);
  res.nodes_explored = value_search.nodes();
  if (!value_search.found()) {
    detail::tally(inst, res);
    return res;
  }

  std::vector<bool> witness = value_search.argmax();
  PartialAssignment fix(n, Fix::free);
  double rate_left = inst.backhaul_cap, bw_left = inst.bandwidth_cap;
  for (std::size_t i = 0; i < n; ++i) {
    bool take = witness[i];
    if (!take && inst.rates[i] <= rate_left + kEps && inst.bandwidths[i] <= bw_left + kEps) {
      PartialAssignment trial = fix;
      trial[i] = Fix::in;
      std::vector<std::size_t> rest;
      for (std::size_t j : order)
        if (j > i) rest.push_back(j);
      detail::Search probe(inst, std::move(rest), std::move(trial), true);
      if (probe.find_target(best)) {
        witness = probe.argmax();
        take = true;
      }
      res.nodes_explored += probe.nodes();
    }
    fix[i] = take ? Fix::in : Fix::out;
    if (take) {
      rate_left -= inst.rates[i];
      bw_left -= inst.bandwidths[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) res.selected[i] = fix[i] == Fix::in;
  detail::tally(inst, res);
  return res;
}

/// Exhaustive enumeration of all 2^n subsets (test oracle), same
/// tie-breaking as solve_bnb.
inline SelectionResult solve_brute_force(const SelectionInstance& inst) {
  inst.validate();
  const std::size_t n = inst.size();
  if (n > 25) throw ModelError("solve_brute_force: refusing to enumerate more than 2^25 subsets");
  SelectionResult res;
  res.selected.assign(n, false);
  std::vector<bool> cur(n, false);
  double best = -1.0;
  std::uint64_t leaves = 0;

  // Include-first recursion visits subsets in lexicographic preference order.
  auto walk = [&](auto&& self, std::size_t i, double w, double r, double b) -> void {
    if (i == n) {
      ++leaves;
      if (r <= inst.backhaul_cap + kEps && b <= inst.bandwidth_cap + kEps && w > best + kEps) {
        best = w;
        res.selected = cur;
      }
      return;
    }
    cur[i] = true;
    self(self, i + 1, w + inst.weights[i], r + inst.rates[i], b + inst.bandwidths[i]);
    cur[i] = false;
    self(self, i + 1, w, r, b);
  };
  walk(walk, 0, 0.0, 0.0, 0.0);
  res.nodes_explored = leaves;
  detail::tally(inst, res);
  return res;
}

}  // namespace dronebs
