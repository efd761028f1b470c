// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "afar/harness.hpp"
#include "afar/util.hpp"

namespace fs = std::filesystem;
using namespace afar;

namespace {

constexpr const char* kConfigKeyHelp = R"(Config file keys (JSON; every key optional, flag overrides file):
  uav_fence / rover_fence      {south, west, north, east, alt_min, alt_max}
                               default: 300 m squares at (35.7275, -78.696),
                               rover fence shifted 60 m east, UAV altitude band 20-110 m
  rover_pos                    {lat, lon, alt}; required by `run`
  start_pos                    default: UAV-fence SW corner at 50 m
  channel.profile              "emulator" (sigma=10 dB, fades off; default) or
                               "testbed" (sigma=5 dB, 30-40 dB burst fades)
  channel.*                    freq_hz=3.4e9 tx_power_dbm=20 noise_sigma_db=10
                               fades_enabled=false fade_depth_min_db=30 fade_depth_max_db=40
                               fade_enter_prob=0.05 fade_exit_prob=0.3 overhead_null_db=10
                               tilt_penalty_db_per_deg=0.3 noise_floor_dbm=-95
  strategy                     baseline|gradient|nyu_bo|unt_recursive|uga_gp (default baseline)
  seed                         default 1
  dt / duration_s              default 0.1 / 600
  fast_deadline_s              default 180
  sample_period_s              default 0.2
  sampling.*                   buffer_capacity=8 buffer_period_s=0.2 qv_window=5
                               qv_threshold=0.005 qv_escalation=2
  gp.*                         lengthscale_m=60 signal_var=100 noise_var=25
                               prior_mean_dbm=-80 grid_nx=30 grid_ny=30 ucb_kappa=2
  strategies.baseline          leg_m=40 speed_mps=10 cruise_alt_m=30
  strategies.gradient          interval_start_m=40 interval_min_m=5 interval_max_m=80
                               decay=0.9 momentum_step_m=5 boundary_margin_m=10
                               speed_mps=10 cruise_alt_m=30
  strategies.nyu_bo            edge_speed_mps=10 cruise_alt_m=30 edge_deadline_s=150
                               train_bin_s=2 refit_every=8 boundary_pin_tol_m=12
                               boundary_pin_count=3 probe_leg_m=60 probe_speed_mps=3
  strategies.unt_recursive     max_depth=4 speed_mps=10 cruise_alt_m=30
  strategies.uga_gp            corner_shrink=0.2 circle_radius_m=40 circle_points=8
                               est_stable_m=15 est_stable_count=3 speed_mps=10
                               cruise_alt_m=30 dwell_timeout_s=10 thin_spacing_m=8
                               max_train_points=400 refit_every=10
  locations                    3 benchmark hiding spots (default L1 near start,
                               L2 far corner near an edge, L3 past the east fence edge)
)";

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool seed_set = false;
    std::string strategy;
    std::string channel_profile;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--out-dir", o.out_dir, "Directory for output files (default .)");
    cmd->add_option("--seed", o.seed, "Master seed override")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--strategy", o.strategy,
                    "Strategy override: baseline|gradient|nyu_bo|unt_recursive|uga_gp");
    cmd->add_option("--channel-profile", o.channel_profile,
                    "Channel profile override: emulator|testbed");
    cmd->add_flag("--quiet", o.quiet, "Suppress the stdout summary");
}

EpisodeConfig load_with_overrides(const CommonOpts& o) {
    EpisodeConfig cfg = o.config_path.empty() ? default_config() : load_config_file(o.config_path);
    if (o.seed_set) cfg.seed = o.seed;
    if (!o.strategy.empty()) cfg.strategy = o.strategy;
    if (!o.channel_profile.empty()) {
        const auto p = profile_by_name(o.channel_profile);
        if (!p) throw ConfigError("channel.profile", "unknown profile \"" + o.channel_profile + "\"");
        cfg.channel = *p;
    }
    return cfg;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

std::string score_text(const ScoreReport& r, const EpisodeConfig& cfg) {
    std::ostringstream ss;
    ss << "strategy:        " << r.strategy << "\n"
       << "seed:            " << r.seed << "\n"
       << "fast error (m):  " << fmt_g9(r.fast_error_m) << "\n"
       << "final error (m): " << fmt_g9(r.final_error_m) << "\n"
       << "fast estimate:   " << fmt_g9(r.fast_estimate.lat) << ", " << fmt_g9(r.fast_estimate.lon)
       << "\n"
       << "final estimate:  " << fmt_g9(r.final_estimate.lat) << ", "
       << fmt_g9(r.final_estimate.lon) << "\n"
       << "rover:           " << fmt_g9(cfg.rover_pos->lat) << ", " << fmt_g9(cfg.rover_pos->lon)
       << "\n"
       << "distance flown:  " << fmt_g9(r.distance_flown_m) << " m\n"
       << "samples:         " << r.samples_accepted << " accepted, " << r.samples_rejected
       << " rejected\n";
    return ss.str();
}

int cmd_run(const CommonOpts& o) {
    EpisodeConfig cfg = load_with_overrides(o);
    cfg.validate(true);
    fs::create_directories(o.out_dir);

    const EpisodeResult res = run_episode(cfg);
    write_file(fs::path(o.out_dir) / "log.csv", res.log.to_csv());
    write_file(fs::path(o.out_dir) / "trajectory.geojson",
               trajectory_geojson(res.log, res.report, *cfg.rover_pos));
    write_file(fs::path(o.out_dir) / "score.txt", score_text(res.report, cfg));
    if (res.radio_map_csv) {
        write_file(fs::path(o.out_dir) / "radiomap.csv", *res.radio_map_csv);
    }
    if (!o.quiet) std::cout << score_text(res.report, cfg);
    return 0;
}

int cmd_bench(const CommonOpts& o, int nseeds, const std::string& strategies_csv) {
    if (nseeds < 1) throw ConfigError("seeds", "need at least one seed");
    EpisodeConfig cfg = load_with_overrides(o);

    std::vector<std::string> strategies;
    std::stringstream ss(strategies_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) strategies.push_back(item);
    }
    if (strategies.empty()) throw ConfigError("strategies", "empty strategy list");
    for (const auto& s : strategies) {
        EpisodeConfig probe = cfg;
        probe.strategy = s;
        probe.validate(false);
    }

    std::vector<uint64_t> seeds(static_cast<size_t>(nseeds));
    for (int i = 0; i < nseeds; ++i) seeds[static_cast<size_t>(i)] = static_cast<uint64_t>(i + 1);

    BenchmarkSummary all;
    std::vector<StrategyScore> rows;
    for (const auto& s : strategies) {
        EpisodeConfig base = cfg;
        base.strategy = s;
        const BenchmarkSummary part = run_benchmark(base, cfg.locations, seeds);
        all.entries.insert(all.entries.end(), part.entries.begin(), part.entries.end());
        rows.push_back(summarize_strategy(part, s));
    }

    long failures = 0;
    for (const auto& e : all.entries) {
        if (e.failed) {
            ++failures;
            std::cerr << "episode failed (" << e.strategy << ", location " << e.location
                      << ", seed " << e.seed << "): " << e.error << "\n";
        }
    }

    fs::create_directories(o.out_dir);
    std::ostringstream csv;
    write_benchmark_csv(all, csv);
    write_file(fs::path(o.out_dir) / "benchmark.csv", csv.str());
    const std::string table = format_benchmark_table(rows);
    write_file(fs::path(o.out_dir) / "benchmark_table.txt", table);
    if (!o.quiet) std::cout << table;
    return failures == 0 ? 0 : 1;
}

int cmd_plot_data(const CommonOpts& o, const std::string& log_path) {
    EpisodeConfig cfg = load_with_overrides(o);
    cfg.validate(true);
    const FlightLog log = FlightLog::from_csv_file(log_path);
    fs::create_directories(o.out_dir);

    const auto rows = error_series(log, *cfg.rover_pos, cfg.fast_deadline_s);
    std::ostringstream ss;
    write_error_series_csv(rows, ss);
    write_file(fs::path(o.out_dir) / "error_vs_time.csv", ss.str());

    if (strategy_uses_radio_map(cfg.strategy)) {
        // The episode is deterministic, so re-running the same config
        // regenerates the final radio map the logged flight produced.
        const EpisodeResult res = run_episode(cfg);
        if (res.radio_map_csv) {
            write_file(fs::path(o.out_dir) / "radiomap.csv", *res.radio_map_csv);
        }
    } else {
        std::cerr << "no radio map: strategy \"" << cfg.strategy << "\" does not build one\n";
    }
    return 0;
}

int cmd_replay(const CommonOpts& o, const std::string& log_path) {
    EpisodeConfig cfg = load_with_overrides(o);
    cfg.validate(true);
    const FlightLog log = FlightLog::from_csv_file(log_path);
    const ScoreReport rep = replay(log, cfg);
    if (!o.quiet) std::cout << score_text(rep, cfg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"afar: desk-scale digital twin of a UAV hidden-transmitter search challenge"};
    app.footer(kConfigKeyHelp);
    app.require_subcommand(1);

    CommonOpts run_opts, bench_opts, plot_opts, replay_opts;
    int nseeds = 1;
    std::string strategies_csv = "baseline,gradient,nyu_bo,unt_recursive,uga_gp";
    std::string plot_log, replay_log;

    CLI::App* run = app.add_subcommand("run", "Run one episode; writes log.csv, trajectory.geojson, score.txt (and radiomap.csv for GP strategies)");
    add_common(run, run_opts);

    CLI::App* bench = app.add_subcommand("bench", "Run the 3-location benchmark over seeds and strategies; writes benchmark.csv and a scoreboard table");
    add_common(bench, bench_opts);
    bench->add_option("--seeds", nseeds, "Number of seeds (1..N; default 1)");
    bench->add_option("--strategies", strategies_csv, "Comma-separated strategy list (default: all)");

    CLI::App* plot = app.add_subcommand("plot-data", "Emit plot-ready CSVs from a flight log: error_vs_time.csv (with the fast-deadline marker row) and radiomap.csv for GP strategies");
    add_common(plot, plot_opts);
    plot->add_option("--log", plot_log, "Flight log CSV produced by `run`")->required();

    CLI::App* rep = app.add_subcommand("replay", "Recompute the score report from a flight log");
    add_common(rep, replay_opts);
    rep->add_option("--log", replay_log, "Flight log CSV produced by `run`")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_opts);
        if (bench->parsed()) return cmd_bench(bench_opts, nseeds, strategies_csv);
        if (plot->parsed()) return cmd_plot_data(plot_opts, plot_log);
        if (rep->parsed()) return cmd_replay(replay_opts, replay_log);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
