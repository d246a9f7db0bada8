#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dronebs/config.hpp"

using namespace dronebs;

namespace {

std::string error_of(const std::string& text, const std::vector<std::string>& ov = {}) {
  try {
    config_from_string(text, ov);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, EmptyDocumentGivesReferenceDefaults) {
  const RunConfig c = config_from_string("");
  const auto& sys = c.scenario.sys;
  const auto& env = c.scenario.env;
  EXPECT_EQ(c.environment, "urban");
  EXPECT_EQ(env.a, 9.61);
  EXPECT_EQ(env.b, 0.16);
  EXPECT_EQ(env.eta_los_db, 1.0);
  EXPECT_EQ(env.eta_nlos_db, 20.0);
  EXPECT_EQ(sys.carrier_hz, 2e9);
  EXPECT_EQ(sys.tx_power_w, 5.0);
  EXPECT_EQ(sys.bandwidth_mhz, 15.0);
  EXPECT_EQ(sys.backhaul_mbps, 80.0);
  EXPECT_EQ(sys.pl_max_db, 120.0);
  EXPECT_EQ(sys.noise_density_dbm_hz, -174.0);
  EXPECT_EQ(sys.noise_figure_db, 0.0);
  EXPECT_EQ(sys.bounds.width(), 4000.0);
  EXPECT_EQ(sys.bounds.height(), 4000.0);
  EXPECT_EQ(sys.h_min_m, 100.0);
  EXPECT_EQ(sys.h_max_m, 400.0);
  EXPECT_EQ(c.scenario.cluster.parent_density_per_m2, 1e-7);
  EXPECT_EQ(c.scenario.cluster.mean_users_per_cluster, 90.0);
  EXPECT_EQ(c.scenario.cluster.cluster_radius_m, 700.0);
  EXPECT_EQ(c.scenario.rate_set_mbps, (std::vector<double>{0.1, 0.5, 1.0, 1.5, 2.0}));
  EXPECT_EQ(c.mode, Mode::network_centric);
  EXPECT_EQ(c.seeds.size(), 20u);
  EXPECT_EQ(c.backhaul_values_mbps.front(), 10.0);
  EXPECT_EQ(c.backhaul_values_mbps.back(), 200.0);
  EXPECT_EQ(c.displacement_values_m, (std::vector<double>{0, 25, 50, 100, 150, 200}));
}

TEST(Config, OverrideChangesOnlyItsKey) {
  const RunConfig base = config_from_string("");
  const RunConfig c = config_from_string("", {"backhaul_mbps=150"});
  EXPECT_EQ(c.scenario.sys.backhaul_mbps, 150.0);
  auto a = to_json(base), b = to_json(c);
  b["backhaul_mbps"] = a["backhaul_mbps"];
  EXPECT_EQ(a, b);
}

TEST(Config, OverrideBeatsFileWhichBeatsDefault) {
  const std::string doc = R"({"pl_max_db": 110, "bandwidth_mhz": 10})";
  const RunConfig c = config_from_string(doc, {"pl_max_db=115"});
  EXPECT_EQ(c.scenario.sys.pl_max_db, 115.0);
  EXPECT_EQ(c.scenario.sys.bandwidth_mhz, 10.0);
  EXPECT_EQ(c.scenario.sys.backhaul_mbps, 80.0);
}

TEST(Config, LastDuplicateOverrideWins) {
  const RunConfig c = config_from_string("", {"backhaul_mbps=20", "backhaul_mbps=30"});
  EXPECT_EQ(c.scenario.sys.backhaul_mbps, 30.0);
}

TEST(Config, ExplicitConstantsBeatPresetInSameDocument) {
  const RunConfig c = config_from_string(R"({"a": 5.0, "environment": "urban"})");
  EXPECT_EQ(c.scenario.env.a, 5.0);
  EXPECT_EQ(c.scenario.env.b, 0.16);
}

TEST(Config, StructuredOverrides) {
  const RunConfig c = config_from_string("", {"seeds=[3,1,2]", "mode=user_centric",
                                               "backhaul_values_mbps=[5, 15]"});
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 1, 2}));
  EXPECT_EQ(c.mode, Mode::user_centric);
  EXPECT_EQ(c.backhaul_values_mbps, (std::vector<double>{5, 15}));
}

TEST(Config, ErrorsNameTheOffendingKey) {
  EXPECT_NE(error_of("", {"pl_max_db=-1"}).find("pl_max_db"), std::string::npos);
  EXPECT_NE(error_of(R"({"no_such_key": 1})").find("no_such_key"), std::string::npos);
  EXPECT_NE(error_of(R"({"bandwidth_mhz": "wide"})").find("bandwidth_mhz"), std::string::npos);
  EXPECT_NE(error_of("", {"mode=sideways"}).find("mode"), std::string::npos);
  EXPECT_NE(error_of("", {"seeds=[]"}).find("seeds"), std::string::npos);
  EXPECT_NE(error_of("", {"backhaul_values_mbps=[20,10]"}).find("backhaul_values_mbps"),
            std::string::npos);
  EXPECT_NE(error_of("", {"environment=suburban"}).find("environment"), std::string::npos);
  EXPECT_NE(error_of("", {"h_min_m=500"}).find("h_"), std::string::npos);
  EXPECT_NE(error_of("", {"grid_step_m=0"}).find("grid_step_m"), std::string::npos);
  EXPECT_FALSE(error_of("{ not json").empty());
  EXPECT_FALSE(error_of("[1, 2]").empty());
  EXPECT_FALSE(error_of("", {"novalue"}).empty());
}

TEST(Config, ResolvedJsonRoundTrips) {
  const RunConfig c = config_from_string(R"({"grid_step_m": 50, "seeds": [7, 8]})",
                                         {"mode=user_centric", "rate_set_mbps=[0.25, 4]"});
  const RunConfig again = config_from_string(to_json(c).dump());
  EXPECT_EQ(to_json(again), to_json(c));
  EXPECT_EQ(config_hash(again), config_hash(c));
}

TEST(Config, HashTracksContent) {
  const RunConfig a = config_from_string("");
  const RunConfig b = config_from_string("", {"backhaul_mbps=81"});
  EXPECT_EQ(config_hash(a), config_hash(config_from_string("")));
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Config, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "dronebs_cfg_test.json";
  {
    std::ofstream out(path);
    out << R"({"backhaul_mbps": 40})";
  }
  const RunConfig c = load_config(path.string(), {"pl_max_db=118"});
  EXPECT_EQ(c.scenario.sys.backhaul_mbps, 40.0);
  EXPECT_EQ(c.scenario.sys.pl_max_db, 118.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), ConfigError);
}
