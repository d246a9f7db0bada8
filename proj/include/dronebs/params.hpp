#pragma once

#include <string>

#include "errors.hpp"

namespace dronebs {

/// Propagation constants of the probabilistic air-to-ground model for one
/// environment class. Defaults are the urban preset.
struct EnvironmentParams {
  double a = 9.61;
  double b = 0.16;
  double eta_los_db = 1.0;
  double eta_nlos_db = 20.0;

  static EnvironmentParams urban() { return {}; }

  void validate() const {
    if (!(a > 0.0)) throw ConfigError("a: must be > 0");
    if (!(b > 0.0)) throw ConfigError("b: must be > 0");
    if (!(eta_los_db >= 0.0)) throw ConfigError("eta_los_db: must be >= 0");
    if (!(eta_nlos_db >= eta_los_db))
      throw ConfigError("eta_nlos_db: must be >= eta_los_db");
  }
};

/// Rectangular search/deployment area in meters.
struct AreaBounds {
  double x_min = 0.0;
  double x_max = 4000.0;
  double y_min = 0.0;
  double y_max = 4000.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  void validate() const {
    if (!(x_max > x_min)) throw ConfigError("x_max_m: must be > x_min_m");
    if (!(y_max > y_min)) throw ConfigError("y_max_m: must be > y_min_m");
  }
};

/// Radio and search configuration of a single drone base station.
/// Rates are in Mbps and bandwidths in MHz throughout the solver.
struct SystemParams {
  double carrier_hz = 2e9;
  double tx_power_w = 5.0;
  double bandwidth_mhz = 15.0;
  double backhaul_mbps = 80.0;
  double pl_max_db = 120.0;
  double noise_density_dbm_hz = -174.0;
  double noise_figure_db = 0.0;
  AreaBounds bounds{};
  double h_min_m = 100.0;
  double h_max_m = 400.0;
  double grid_step_m = 100.0;

  void validate() const {
    if (!(carrier_hz > 0.0)) throw ConfigError("carrier_hz: must be > 0");
    if (!(tx_power_w > 0.0)) throw ConfigError("tx_power_w: must be > 0");
    if (!(bandwidth_mhz > 0.0)) throw ConfigError("bandwidth_mhz: must be > 0");
    if (!(backhaul_mbps > 0.0)) throw ConfigError("backhaul_mbps: must be > 0");
    if (!(pl_max_db > 0.0)) throw ConfigError("pl_max_db: must be > 0");
    if (!(noise_figure_db >= 0.0)) throw ConfigError("noise_figure_db: must be >= 0");
    bounds.validate();
    if (!(h_min_m > 0.0)) throw ConfigError("h_min_m: must be > 0");
    if (!(h_max_m >= h_min_m)) throw ConfigError("h_max_m: must be >= h_min_m");
    if (!(grid_step_m > 0.0)) throw ConfigError("grid_step_m: must be > 0");
  }
};

}  // namespace dronebs
