#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "dronebs/channel.hpp"
#include "json.hpp"

using namespace dronebs;
using namespace dronebs::channel;

namespace {

const EnvironmentParams kUrban = EnvironmentParams::urban();
const SystemParams kSys{};

double deg(double d) { return d * std::numbers::pi / 180.0; }

// Geometry with a prescribed elevation angle and slant distance.
LinkGeometry at_elevation(double elevation_rad, double slant_m) {
  return LinkGeometry(slant_m * std::cos(elevation_rad), slant_m * std::sin(elevation_rad));
}

nlohmann::json golden() {
  std::ifstream in(DRONEBS_TEST_DATA_DIR "/channel_golden.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Geometry, DirectlyBelowIsVertical) {
  const LinkGeometry g(0.0, 400.0);
  EXPECT_EQ(g.elevation_rad(), std::numbers::pi / 2.0);
  EXPECT_EQ(g.slant_distance_m(), 400.0);
}

TEST(Geometry, SlantAtLeastAltitude) {
  for (double r : {0.0, 1.0, 100.0, 5000.0}) {
    const LinkGeometry g(r, 250.0);
    EXPECT_GE(g.slant_distance_m(), g.altitude_m);
    EXPECT_GT(g.elevation_rad(), 0.0);
    EXPECT_LE(g.elevation_rad(), std::numbers::pi / 2.0);
  }
}

TEST(LosProbability, ExponentVanishesAtA) {
  EXPECT_NEAR(los_probability_deg(kUrban.a, kUrban), 1.0 / (1.0 + 9.61), 1e-15);
}

TEST(LosProbability, GoldenVectors) {
  const auto g = golden();
  EXPECT_NEAR(los_probability(LinkGeometry(0.0, 400.0), kUrban), g["los_at_90_degrees"].get<double>(), 1e-12);
  EXPECT_NEAR(los_probability_deg(0.0, kUrban), g["los_at_0_degrees"].get<double>(), 1e-12);
  EXPECT_NEAR(los_probability_deg(0.0, kUrban), 0.02188, 5e-5);
  EXPECT_NEAR(los_probability(LinkGeometry(0.0, 400.0), kUrban), 0.999975, 1e-6);
}

TEST(LosProbability, MonotoneAndInsideUnitInterval) {
  double prev = 0.0;
  for (int i = 1; i <= 900; ++i) {
    const double p = los_probability_deg(i * 0.1, kUrban);
    EXPECT_GT(p, prev);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
    prev = p;
  }
}

TEST(Pathloss, GoldenVectors) {
  const auto g = golden();
  EXPECT_NEAR(mean_pathloss(LinkGeometry(0.0, 400.0), kUrban, 2e9),
              g["pathloss_h400_r0_db"].get<double>(), 1e-9);
  EXPECT_NEAR(mean_pathloss(LinkGeometry(1000.0, 400.0), kUrban, 2e9),
              g["pathloss_h400_r1000_db"].get<double>(), 1e-9);
  EXPECT_NEAR(mean_pathloss(LinkGeometry(0.0, 400.0), kUrban, 2e9), 91.51, 0.01);
  EXPECT_NEAR(mean_pathloss(LinkGeometry(1000.0, 400.0), kUrban, 2e9), 111.08, 0.01);
}

TEST(Pathloss, ZeroWhenFriisArgumentIsOne) {
  EnvironmentParams lossless{9.61, 0.16, 0.0, 0.0};
  const double fc = 2e9;
  const double d = kSpeedOfLight / (4.0 * std::numbers::pi * fc);
  EXPECT_NEAR(mean_pathloss(LinkGeometry(0.0, d), lossless, fc), 0.0, 1e-12);
}

TEST(Pathloss, AtLeastFreeSpacePlusLosExcess) {
  for (double h : {50.0, 100.0, 400.0})
    for (double r : {0.0, 10.0, 300.0, 2000.0, 8000.0}) {
      const LinkGeometry g(r, h);
      EXPECT_GE(mean_pathloss(g, kUrban, 2e9),
                free_space_pathloss_db(g.slant_distance_m(), 2e9) + kUrban.eta_los_db - 1e-12);
    }
}

TEST(Pathloss, DoublingSlantDistanceAddsSixDb) {
  for (double theta_deg : {5.0, 20.0, 45.0, 80.0}) {
    const double t = deg(theta_deg);
    const double a = mean_pathloss(at_elevation(t, 500.0), kUrban, 2e9);
    const double b = mean_pathloss(at_elevation(t, 1000.0), kUrban, 2e9);
    EXPECT_NEAR(b - a, 20.0 * std::log10(2.0), 1e-9);
  }
}

TEST(Pathloss, TermsMoveOppositelyWithAltitude) {
  const double r = 800.0;
  double prev_excess = 1e9, prev_fspl = -1e9;
  for (double h = 50.0; h <= 1000.0; h += 50.0) {
    const LinkGeometry g(r, h);
    const double excess = excess_loss_db(g, kUrban);
    const double fspl = free_space_pathloss_db(g.slant_distance_m(), 2e9);
    EXPECT_LT(excess, prev_excess);
    EXPECT_GT(fspl, prev_fspl);
    prev_excess = excess;
    prev_fspl = fspl;
  }
}

TEST(SpectralEfficiency, GoldenVectors) {
  const auto g = golden();
  EXPECT_NEAR(snr_db(100.0, kSys), 39.23, 0.005);
  EXPECT_NEAR(snr_db(120.0, kSys), 19.23, 0.005);
  EXPECT_NEAR(spectral_efficiency(100.0, kSys), g["spectral_eff_pl100"].get<double>(), 1e-9);
  EXPECT_NEAR(spectral_efficiency(120.0, kSys), g["spectral_eff_pl120"].get<double>(), 1e-9);
}

TEST(SpectralEfficiency, VanishesForHugeLoss) {
  EXPECT_NEAR(spectral_efficiency(1000.0, kSys), 0.0, 1e-60);
  double prev = 1e9;
  for (double pl = 60.0; pl <= 200.0; pl += 5.0) {
    const double z = spectral_efficiency(pl, kSys);
    EXPECT_LT(z, prev);
    prev = z;
  }
}

TEST(RequiredBandwidth, Examples) {
  const auto g = golden();
  EXPECT_NEAR(required_bandwidth(2e6, spectral_efficiency(120.0, kSys)),
              g["bandwidth_2mbps_pl120_hz"].get<double>(), 1e-6);
  EXPECT_EQ(required_bandwidth(0.0, 3.0), 0.0);
  EXPECT_EQ(required_bandwidth(1e6, 1.0), 1e6);
  EXPECT_THROW(required_bandwidth(1.0, 0.0), ModelError);
  EXPECT_THROW(required_bandwidth(1.0, -2.0), ModelError);
}

TEST(RequiredBandwidth, GrowsWithSlantDistanceAtFixedElevation) {
  const double t = deg(30.0);
  double prev = 0.0;
  for (double d = 100.0; d <= 3000.0; d += 100.0) {
    const double pl = mean_pathloss(at_elevation(t, d), kUrban, 2e9);
    const double b = required_bandwidth(1.0, spectral_efficiency(pl, kSys));
    EXPECT_GT(b, prev);
    prev = b;
  }
}

TEST(EnvironmentParams, Validation) {
  EXPECT_NO_THROW(kUrban.validate());
  EXPECT_THROW((EnvironmentParams{0.0, 0.16, 1.0, 20.0}.validate()), ConfigError);
  EXPECT_THROW((EnvironmentParams{9.61, 0.16, 21.0, 20.0}.validate()), ConfigError);
  EXPECT_THROW((EnvironmentParams{9.61, 0.16, -1.0, 20.0}.validate()), ConfigError);
}
