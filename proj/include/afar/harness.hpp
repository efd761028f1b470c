// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afar/config.hpp"
#include "afar/strategy.hpp"

namespace afar {

/// One logged measurement step. Rows are written at the channel sampling
/// cadence with strictly increasing timestamps.
struct LogRecord {
    double t = 0.0;
    double lat = 0.0, lon = 0.0, alt = 0.0;
    double tilt_deg = 0.0;
    double rssi_dbm = 0.0;
    double confidence = 0.0;
    bool accepted = false;
    double est_lat = 0.0, est_lon = 0.0;
    std::string phase;
};

struct FlightLog {
    static constexpr const char* kHeader =
        "t,lat,lon,alt,tilt_deg,rssi_dbm,confidence,accepted,est_lat,est_lon,phase";

    std::vector<LogRecord> records;

    /// CSV with the pinned header, floats at 9 significant digits, UNIX
    /// newlines. Byte-identical for identical episodes.
    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

    /// Throws std::runtime_error on a header/schema mismatch or a malformed
    /// row.
    static FlightLog from_csv(std::istream& is);
    static FlightLog from_csv_file(const std::string& path);
};

/// Scoring output of one episode. samples_rejected counts conditioned
/// samples a quality gate discarded; it is a run-time diagnostic that a
/// replay cannot recover from the log (replays report zero there).
struct ScoreReport {
    std::string strategy;
    uint64_t seed = 0;
    double fast_error_m = 0.0;
    double final_error_m = 0.0;
    GeoPoint fast_estimate;
    GeoPoint final_estimate;
    double distance_flown_m = 0.0;
    long samples_accepted = 0;
    long samples_rejected = 0;
};

struct EpisodeResult {
    ScoreReport report;
    FlightLog log;
    std::optional<std::string> radio_map_csv;  // GP-backed strategies only
};

/// Fixed-step synchronous episode: vehicle step at dt, channel sample and
/// strategy step at sample_period_s, estimate snapshots exactly at the fast
/// deadline and at the end. Deterministic for a given (config, seed).
EpisodeResult run_episode(const EpisodeConfig& cfg);

/// Same loop with an injected policy (tests use oracle/stub strategies).
EpisodeResult run_episode(const EpisodeConfig& cfg, Strategy& strategy);

/// Recomputes the scores from a log plus the config that produced it.
/// Throws std::runtime_error when the log lacks the fast or final snapshot
/// row (truncated log).
ScoreReport replay(const FlightLog& log, const EpisodeConfig& cfg);

struct BenchmarkEntry {
    std::string strategy;
    int location = 0;  // 1-based, matching the summary CSV
    uint64_t seed = 0;
    double fast_error_m = 0.0;
    double final_error_m = 0.0;
    bool failed = false;
    std::string error;
};

struct BenchmarkSummary {
    std::vector<BenchmarkEntry> entries;
};

/// Competition-style fast/final per-location medians plus the average across
/// the three locations (the averaging the scoring protocol uses).
struct StrategyScore {
    std::string strategy;
    double fast_median[3] = {0, 0, 0};
    double final_median[3] = {0, 0, 0};
    double fast_average = 0.0;   // mean of the three per-location medians
    double final_average = 0.0;
};

/// Every (location, seed) pair of `base` with its strategy; per-episode
/// failures are recorded in the entry rather than aborting the batch.
BenchmarkSummary run_benchmark(const EpisodeConfig& base, std::span<const GeoPoint> locations,
                               std::span<const uint64_t> seeds);

double median(std::vector<double> values);

/// Mean of the three per-location errors, the competition averaging rule.
double average_of_three(double a, double b, double c);

StrategyScore summarize_strategy(const BenchmarkSummary& summary, const std::string& strategy);

/// Per-seed final averages (mean over the three locations at one seed);
/// robust statistics over seeds are taken on these.
std::vector<double> per_seed_final_averages(const BenchmarkSummary& summary,
                                            const std::string& strategy);
std::vector<double> per_seed_fast_averages(const BenchmarkSummary& summary,
                                           const std::string& strategy);

/// `strategy,location,seed,fast_error_m,final_error_m` rows.
void write_benchmark_csv(const BenchmarkSummary& summary, std::ostream& os);

/// Text table shaped like the competition scoreboard: Fast 1..3, Fast
/// Average, Final 1..3, Final Average per strategy.
std::string format_benchmark_table(const std::vector<StrategyScore>& rows);

/// GeoJSON FeatureCollection: the flown path as a LineString plus Point
/// features for the fast/final estimates and the true rover position.
std::string trajectory_geojson(const FlightLog& log, const ScoreReport& report,
                               const GeoPoint& rover);

struct PlotRow {
    double t = 0.0;
    double error_m = 0.0;
    bool fast_marker = false;
};

/// Estimate-error-vs-time series with a single marker row at the fast
/// deadline.
std::vector<PlotRow> error_series(const FlightLog& log, const GeoPoint& rover,
                                  double fast_deadline_s);
void write_error_series_csv(std::span<const PlotRow> rows, std::ostream& os);

} // namespace afar
