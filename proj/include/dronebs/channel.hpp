#pragma once

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "params.hpp"

namespace dronebs::channel {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Drone-to-user link geometry. Elevation is pi/2 exactly when the user
/// sits directly beneath the drone.
struct LinkGeometry {
  double horizontal_distance_m = 0.0;
  double altitude_m = 0.0;

  LinkGeometry(double horizontal_m, double altitude)
      : horizontal_distance_m(horizontal_m), altitude_m(altitude) {}

  double elevation_rad() const {
    if (horizontal_distance_m == 0.0) return std::numbers::pi / 2.0;
    return std::atan(altitude_m / horizontal_distance_m);
  }
  double elevation_deg() const { return elevation_rad() * 180.0 / std::numbers::pi; }
  double slant_distance_m() const { return std::hypot(altitude_m, horizontal_distance_m); }
};

/// S-curve LoS probability as a function of the elevation angle in degrees.
inline double los_probability_deg(double elevation_deg, const EnvironmentParams& env) {
  return 1.0 / (1.0 + env.a * std::exp(-env.b * (elevation_deg - env.a)));
}

inline double los_probability(const LinkGeometry& geom, const EnvironmentParams& env) {
  return los_probability_deg(geom.elevation_deg(), env);
}

/// Friis free-space term in dB.
inline double free_space_pathloss_db(double distance_m, double carrier_hz) {
  return 20.0 * std::log10(4.0 * std::numbers::pi * carrier_hz * distance_m / kSpeedOfLight);
}

/// Expected excess loss: LoS/NLoS losses mixed by the LoS probability.
inline double excess_loss_db(const LinkGeometry& geom, const EnvironmentParams& env) {
  const double p = los_probability(geom, env);
  return p * env.eta_los_db + (1.0 - p) * env.eta_nlos_db;
}

inline double mean_pathloss(const LinkGeometry& geom, const EnvironmentParams& env,
                            double carrier_hz) {
  return free_space_pathloss_db(geom.slant_distance_m(), carrier_hz) + excess_loss_db(geom, env);
}

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

/// Thermal noise power over the full system bandwidth, in dBm.
inline double noise_power_dbm(const SystemParams& sys) {
  return sys.noise_density_dbm_hz + 10.0 * std::log10(sys.bandwidth_mhz * 1e6) +
         sys.noise_figure_db;
}

inline double snr_db(double pathloss_db, const SystemParams& sys) {
  return watts_to_dbm(sys.tx_power_w) - pathloss_db - noise_power_dbm(sys);
}

/// Shannon spectral efficiency log2(1 + SNR) in bps/Hz.
inline double spectral_efficiency(double pathloss_db, const SystemParams& sys) {
  return std::log2(1.0 + std::pow(10.0, snr_db(pathloss_db, sys) / 10.0));
}

/// Bandwidth needed to carry `rate` at `spectral_eff`; units follow the
/// rate (bps -> Hz, Mbps -> MHz).
inline double required_bandwidth(double rate, double spectral_eff) {
  if (!(spectral_eff > 0.0)) throw ModelError("unserveable link: spectral efficiency <= 0");
  return rate / spectral_eff;
}

}  // namespace dronebs::channel
