#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "json.hpp"
#include "placement.hpp"
#include "users.hpp"
#include "version.hpp"

namespace dronebs::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kRuntimeError = 3 };

inline constexpr const char* kOutDirEnv = "DRONEBS_OUT_DIR";

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::string out_dir;
  bool verbose = false;
  bool record_timing = false;
};

/// Writes files atomically (temp + rename) and removes everything it wrote
/// if the run is abandoned.
class OutputSet {
public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  std::filesystem::path write(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir_);
    const auto path = dir_ / name;
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw ModelError("cannot write " + tmp.string());
      f << content;
      if (!f) throw ModelError("short write to " + tmp.string());
    }
    written_.push_back(tmp);
    std::filesystem::rename(tmp, path);
    written_.back() = path;
    return path;
  }

  void commit() { committed_ = true; }
  const std::vector<std::filesystem::path>& files() const { return written_; }

private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

namespace detail {

inline std::string tag(const RunConfig& cfg) { return config_hash(cfg).substr(0, 8); }

inline nlohmann::ordered_json metadata(const RunConfig& cfg, const std::string& command) {
  nlohmann::ordered_json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config_hash"] = config_hash(cfg);
  m["seeds"] = cfg.seeds;
  m["config"] = to_json(cfg);
  return m;
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

struct Run {
  const Options& opt;
  const RunConfig& cfg;
  OutputSet& out;
  std::ostream& log;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void stamp(nlohmann::ordered_json& meta) const {
    if (!opt.record_timing) return;
    meta["wall_clock_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  void gen_users() {
    for (std::uint64_t seed : cfg.seeds) {
      const Population pop = scenario_population(cfg.scenario, seed, cfg.mode);
      out.write("users_seed" + std::to_string(seed) + "_" + tag(cfg) + ".csv",
                users_to_csv(pop.users));
      if (opt.verbose)
        log << "seed " << seed << ": " << pop.users.size() << " users, " << pop.parents.size()
            << " clusters, " << pop.resamples << " resamples\n";
    }
  }

  void place_one(const std::vector<User>& users, const std::string& label,
                 nlohmann::ordered_json source) {
    const PlacementResult r = optimal_placement(users, cfg.scenario.sys, cfg.scenario.env, opt.threads);
    verify_placement(r, users, cfg.scenario.sys, cfg.scenario.env);
    nlohmann::ordered_json j;
    j["mode"] = to_string(cfg.mode);
    j["source"] = std::move(source);
    j["config_hash"] = config_hash(cfg);
    j["result"] = to_json(r, users);
    nlohmann::ordered_json meta = metadata(cfg, "place");
    stamp(meta);
    j["metadata"] = std::move(meta);
    const std::string stem = std::string(to_string(cfg.mode)) + "_" + label + "_" + tag(cfg);
    out.write("place_" + stem + ".json", dump(j));
    std::vector<User> served;
    for (std::size_t i = 0; i < users.size(); ++i)
      if (r.selected[i]) served.push_back(users[i]);
    out.write("served_" + stem + ".csv", users_to_csv(served));
    if (opt.verbose)
      log << label << ": (" << r.placement.x << ", " << r.placement.y << ", " << r.placement.h
          << ") served " << r.served_count << ", objective " << r.objective
          << ", nodes_explored " << r.nodes_explored << "\n";
  }

  void place() {
    if (!cfg.users_csv.empty()) {
      const auto users = read_users_csv(cfg.users_csv);
      if (users.empty()) throw ModelError("users_csv: no users");
      place_one(users, "replay", {{"users_csv", cfg.users_csv}});
      return;
    }
    for (std::uint64_t seed : cfg.seeds) {
      const Population pop = scenario_population(cfg.scenario, seed, cfg.mode);
      place_one(pop.users, "seed" + std::to_string(seed),
                {{"seed", seed}, {"population_seed", pop.seed}, {"resamples", pop.resamples}});
    }
  }

  void write_report(const ExperimentReport& rep, const std::string& command) {
    const std::string stem = rep.name + "_" + std::string(to_string(cfg.mode)) + "_" + tag(cfg);
    out.write(stem + ".csv", report_to_csv(rep));
    nlohmann::ordered_json meta = metadata(cfg, command);
    for (const auto& [k, v] : rep.metadata.items()) meta[k] = v;
    meta["summary"] = summary_to_json(rep);
    stamp(meta);
    out.write(stem + ".meta.json", dump(meta));
  }

  void sweep() {
    const SweepSpec spec{cfg.backhaul_values_mbps, cfg.seeds, cfg.mode};
    const ExperimentReport rep = backhaul_sweep(spec, cfg.scenario, opt.threads);
    write_report(rep, "sweep-backhaul");
    if (opt.verbose)
      for (const auto& s : rep.summary)
        if (s.metric == "served_count")
          log << "R=" << s.x_value << " Mbps: served " << s.mean << " +/- " << s.stddev << "\n";
  }

  void robustness() {
    const RobustnessSpec spec{cfg.displacement_values_m, cfg.seeds, cfg.mode};
    const ExperimentReport rep = robustness_eval(spec, cfg.scenario, opt.threads);
    write_report(rep, "robustness");
    if (opt.verbose)
      for (const auto& s : rep.summary)
        if (s.metric == "dropped_percent")
          log << "delta=" << s.x_value << " m: dropped " << s.mean << " %\n";
  }

  /// Served-rate CDF for both weightings, per seed and pooled.
  void cdf() {
    const auto& rates = cfg.scenario.rate_set_mbps;
    const Mode modes[] = {Mode::network_centric, Mode::user_centric};
    const std::size_t ns = cfg.seeds.size();
    std::vector<std::vector<double>> served(ns * 2);
    parallel_for(ns * 2, opt.threads, [&](std::size_t cell) {
      const std::size_t s = cell / 2;
      const Population pop = scenario_population(cfg.scenario, cfg.seeds[s], modes[cell % 2]);
      const PlacementResult r = optimal_placement(pop.users, cfg.scenario.sys, cfg.scenario.env, 1);
      served[cell] = served_rates(r, pop.users);
    });

    ExperimentReport rep;
    rep.name = "cdf";
    std::vector<double> pooled[2];
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t m = 0; m < 2; ++m) {
        const auto& v = served[s * 2 + m];
        pooled[m].insert(pooled[m].end(), v.begin(), v.end());
        const std::string name(to_string(modes[m]));
        rep.raw.push_back({cfg.seeds[s], 0.0, "served_" + name, static_cast<double>(v.size())});
        for (double rho : rates) {
          const auto le = std::count_if(v.begin(), v.end(), [&](double r) { return r <= rho; });
          rep.raw.push_back({cfg.seeds[s], rho, "served_le_" + name, static_cast<double>(le)});
        }
      }
    }
    rep.summary = dronebs::detail::summarize(rep.raw);
    const auto nc = empirical_cdf(pooled[0], rates);
    const auto uc = empirical_cdf(pooled[1], rates);
    std::string table = "rate_mbps,network_centric,user_centric\n";
    for (std::size_t k = 0; k < nc.size(); ++k)
      table += format_double(nc[k].first) + "," + format_double(nc[k].second) + "," +
               format_double(uc[k].second) + "\n";

    out.write("cdf_" + tag(cfg) + ".csv", report_to_csv(rep));
    out.write("cdf_table_" + tag(cfg) + ".csv", table);
    nlohmann::ordered_json meta = metadata(cfg, "cdf");
    meta["experiment"] = "cdf";
    meta["modes"] = {"network_centric", "user_centric"};
    stamp(meta);
    out.write("cdf_" + tag(cfg) + ".meta.json", dump(meta));
    if (opt.verbose) log << table;
  }
};

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-c,--config", o.config_path, "JSON config file (defaults if omitted)");
  sub->add_option("-s,--set", o.overrides, "override a config key, key=value (repeatable)");
  sub->add_option("--mode", o.mode, "network_centric | user_centric");
  sub->add_option("--seed", o.seed, "run a single seed instead of the configured list");
  sub->add_option("-j,--threads", o.threads, "worker threads (does not affect output)")
      ->check(CLI::PositiveNumber);
  sub->add_option("-o,--out", o.out_dir, "output directory (default $DRONEBS_OUT_DIR or .)");
  sub->add_flag("-v,--verbose", o.verbose, "progress and solver diagnostics on stderr");
  sub->add_flag("--record-timing", o.record_timing, "add wall-clock time to metadata");
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& log = std::cerr) {
  CLI::App app{"Backhaul-aware drone base station placement"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1, 1);
  Options opt;
  const char* names[] = {"gen-users", "place", "sweep-backhaul", "robustness", "cdf"};
  const char* help[] = {"sample user populations to CSV",
                        "optimal 3D placement per seed",
                        "served users versus backhaul cap",
                        "served-set loss under user displacement",
                        "served-rate CDF for both weightings"};
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(names); ++k) {
    subs.push_back(app.add_subcommand(names[k], help[k]));
    detail::add_common(subs.back(), opt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, log, log);
    return rc == 0 ? kOk : kConfigError;
  }
  std::string command;
  for (std::size_t k = 0; k < subs.size(); ++k)
    if (subs[k]->parsed()) command = names[k];

  RunConfig cfg;
  try {
    std::vector<std::string> overrides = opt.overrides;
    if (opt.mode) overrides.push_back("mode=" + *opt.mode);
    if (opt.seed) overrides.push_back("seeds=[" + std::to_string(*opt.seed) + "]");
    cfg = load_config(opt.config_path, overrides);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  if (opt.out_dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    opt.out_dir = env && *env ? env : ".";
  }

  try {
    OutputSet out(opt.out_dir);
    detail::Run run{opt, cfg, out, log};
    if (command == "gen-users") run.gen_users();
    else if (command == "place") run.place();
    else if (command == "sweep-backhaul") run.sweep();
    else if (command == "robustness") run.robustness();
    else if (command == "cdf") run.cdf();
    out.commit();
    for (const auto& f : out.files()) log << "wrote " << f.string() << "\n";
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace dronebs::cli
