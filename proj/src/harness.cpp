// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "afar/util.hpp"
#include "afar/vehicle.hpp"

namespace afar {

void FlightLog::write_csv(std::ostream& os) const {
    os << kHeader << '\n';
    for (const auto& r : records) {
        os << fmt_g9(r.t) << ',' << fmt_g9(r.lat) << ',' << fmt_g9(r.lon) << ',' << fmt_g9(r.alt)
           << ',' << fmt_g9(r.tilt_deg) << ',' << fmt_g9(r.rssi_dbm) << ',' << fmt_g9(r.confidence)
           << ',' << (r.accepted ? '1' : '0') << ',' << fmt_g9(r.est_lat) << ','
           << fmt_g9(r.est_lon) << ',' << r.phase << '\n';
    }
}

std::string FlightLog::to_csv() const {
    std::ostringstream ss;
    write_csv(ss);
    return ss.str();
}

FlightLog FlightLog::from_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty flight log");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error("flight log schema mismatch: bad header");

    FlightLog log;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::array<std::string, 11> fields;
        size_t start = 0;
        for (int f = 0; f < 10; ++f) {
            const size_t comma = line.find(',', start);
            if (comma == std::string::npos)
                throw std::runtime_error("flight log row " + std::to_string(lineno) + " truncated");
            fields[static_cast<size_t>(f)] = line.substr(start, comma - start);
            start = comma + 1;
        }
        fields[10] = line.substr(start);

        auto num = [&](int f) {
            size_t used = 0;
            const std::string& s = fields[static_cast<size_t>(f)];
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw std::runtime_error("flight log row " + std::to_string(lineno) + ": bad number");
            return v;
        };
        LogRecord r;
        r.t = num(0);
        r.lat = num(1);
        r.lon = num(2);
        r.alt = num(3);
        r.tilt_deg = num(4);
        r.rssi_dbm = num(5);
        r.confidence = num(6);
        if (fields[7] != "0" && fields[7] != "1")
            throw std::runtime_error("flight log row " + std::to_string(lineno) + ": bad accepted flag");
        r.accepted = fields[7] == "1";
        r.est_lat = num(8);
        r.est_lon = num(9);
        r.phase = fields[10];
        if (!log.records.empty() && r.t <= log.records.back().t)
            throw std::runtime_error("flight log timestamps not strictly increasing");
        log.records.push_back(std::move(r));
    }
    return log;
}

FlightLog FlightLog::from_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read flight log: " + path);
    return from_csv(in);
}

EpisodeResult run_episode(const EpisodeConfig& cfg) {
    auto strategy = make_strategy(cfg);
    return run_episode(cfg, *strategy);
}

EpisodeResult run_episode(const EpisodeConfig& cfg, Strategy& strategy) {
    cfg.validate(true);
    const GeoPoint rover = *cfg.rover_pos;

    Uav uav(cfg.start_pos, cfg.uav_fence, cfg.dt);
    FadeState channel_state = make_channel_state(cfg.seed);

    const long steps = std::lround(cfg.duration_s / cfg.dt);
    const long sample_every = std::lround(cfg.sample_period_s / cfg.dt);
    const long fast_step = std::lround(cfg.fast_deadline_s / cfg.dt);

    EpisodeResult out;
    out.report.strategy = std::string(strategy.name());
    out.report.seed = cfg.seed;
    out.log.records.reserve(static_cast<size_t>(steps / sample_every));

    GeoPoint estimate = cfg.start_pos;  // worst-case fallback: never estimated
    GeoPoint fast_estimate = cfg.start_pos;
    GeoPoint final_estimate = cfg.start_pos;
    GeoPoint prev_pos = cfg.start_pos;
    double distance_flown = 0.0;
    long accepted = 0, rejected = 0;

    for (long k = 1; k <= steps; ++k) {
        uav.step();
        if (k % sample_every != 0) continue;
        const double t = static_cast<double>(k) * cfg.dt;

        const Measurement m = sample_measurement(rover, uav.state().pos, uav.state().tilt_deg,
                                                 cfg.channel, channel_state, t);
        const StrategyDecision dec = strategy.on_measurement(m, uav.state(), t);
        if (dec.estimate) estimate = *dec.estimate;
        if (dec.command) uav.set_waypoint(*dec.command);
        accepted += dec.sample_accepted ? 1 : 0;
        rejected += dec.sample_rejected ? 1 : 0;

        LogRecord r;
        r.t = t;
        r.lat = m.rx_pos.lat;
        r.lon = m.rx_pos.lon;
        r.alt = m.rx_pos.alt;
        r.tilt_deg = uav.state().tilt_deg;
        r.rssi_dbm = m.rssi_dbm;
        r.confidence = m.confidence;
        r.accepted = dec.sample_accepted;
        r.est_lat = estimate.lat;
        r.est_lon = estimate.lon;
        r.phase = std::string(strategy.phase());
        out.log.records.push_back(std::move(r));

        distance_flown += distance_3d(prev_pos, uav.state().pos);
        prev_pos = uav.state().pos;

        if (k == fast_step) fast_estimate = estimate;
        if (k == steps) final_estimate = estimate;
    }

    out.report.fast_estimate = fast_estimate;
    out.report.final_estimate = final_estimate;
    out.report.fast_error_m = horizontal_distance(fast_estimate, rover);
    out.report.final_error_m = horizontal_distance(final_estimate, rover);
    out.report.distance_flown_m = distance_flown;
    out.report.samples_accepted = accepted;
    out.report.samples_rejected = rejected;

    if (const RadioMapGrid* grid = strategy.radio_map(); grid != nullptr) {
        strategy.finalize_radio_map();
        std::ostringstream ss;
        grid->write_csv(ss);
        out.radio_map_csv = ss.str();
    }
    return out;
}

ScoreReport replay(const FlightLog& log, const EpisodeConfig& cfg) {
    cfg.validate(true);
    const GeoPoint rover = *cfg.rover_pos;

    const LogRecord* fast = nullptr;
    const LogRecord* final_rec = nullptr;
    for (const auto& r : log.records) {
        if (fast == nullptr && std::abs(r.t - cfg.fast_deadline_s) < 1e-9) fast = &r;
        if (std::abs(r.t - cfg.duration_s) < 1e-9) final_rec = &r;
    }
    if (fast == nullptr)
        throw std::runtime_error("incomplete fast snapshot: log has no row at the fast deadline");
    if (final_rec == nullptr)
        throw std::runtime_error("incomplete final snapshot: log has no row at the episode end");

    ScoreReport rep;
    rep.strategy = cfg.strategy;
    rep.seed = cfg.seed;
    rep.fast_estimate = {fast->est_lat, fast->est_lon, 0.0};
    rep.final_estimate = {final_rec->est_lat, final_rec->est_lon, 0.0};
    rep.fast_error_m = horizontal_distance(rep.fast_estimate, rover);
    rep.final_error_m = horizontal_distance(rep.final_estimate, rover);

    GeoPoint prev = cfg.start_pos;
    for (const auto& r : log.records) {
        const GeoPoint pos{r.lat, r.lon, r.alt};
        rep.distance_flown_m += distance_3d(prev, pos);
        prev = pos;
        rep.samples_accepted += r.accepted ? 1 : 0;
    }
    return rep;
}

BenchmarkSummary run_benchmark(const EpisodeConfig& base, std::span<const GeoPoint> locations,
                               std::span<const uint64_t> seeds) {
    if (seeds.empty()) throw ConfigError("seeds", "benchmark needs at least one seed");
    BenchmarkSummary summary;
    for (size_t li = 0; li < locations.size(); ++li) {
        for (const uint64_t seed : seeds) {
            EpisodeConfig cfg = base;
            cfg.rover_pos = locations[li];
            cfg.seed = seed;
            BenchmarkEntry e;
            e.strategy = base.strategy;
            e.location = static_cast<int>(li) + 1;
            e.seed = seed;
            try {
                const EpisodeResult res = run_episode(cfg);
                e.fast_error_m = res.report.fast_error_m;
                e.final_error_m = res.report.final_error_m;
            } catch (const std::exception& ex) {
                e.failed = true;
                e.error = ex.what();
            }
            summary.entries.push_back(std::move(e));
        }
    }
    return summary;
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double average_of_three(double a, double b, double c) { return (a + b + c) / 3.0; }

StrategyScore summarize_strategy(const BenchmarkSummary& summary, const std::string& strategy) {
    StrategyScore score;
    score.strategy = strategy;
    for (int loc = 1; loc <= 3; ++loc) {
        std::vector<double> fast, fin;
        for (const auto& e : summary.entries) {
            if (e.strategy != strategy || e.location != loc || e.failed) continue;
            fast.push_back(e.fast_error_m);
            fin.push_back(e.final_error_m);
        }
        score.fast_median[loc - 1] = median(std::move(fast));
        score.final_median[loc - 1] = median(std::move(fin));
    }
    score.fast_average =
        average_of_three(score.fast_median[0], score.fast_median[1], score.fast_median[2]);
    score.final_average =
        average_of_three(score.final_median[0], score.final_median[1], score.final_median[2]);
    return score;
}

namespace {
std::vector<double> per_seed_averages(const BenchmarkSummary& summary, const std::string& strategy,
                                      bool fast) {
    std::vector<uint64_t> seeds;
    for (const auto& e : summary.entries) {
        if (e.strategy == strategy && std::find(seeds.begin(), seeds.end(), e.seed) == seeds.end())
            seeds.push_back(e.seed);
    }
    std::vector<double> out;
    for (const uint64_t seed : seeds) {
        double sum = 0.0;
        int n = 0;
        bool ok = true;
        for (const auto& e : summary.entries) {
            if (e.strategy != strategy || e.seed != seed) continue;
            if (e.failed) {
                ok = false;
                break;
            }
            sum += fast ? e.fast_error_m : e.final_error_m;
            ++n;
        }
        if (ok && n > 0) out.push_back(sum / n);
    }
    return out;
}
} // namespace

std::vector<double> per_seed_final_averages(const BenchmarkSummary& summary,
                                            const std::string& strategy) {
    return per_seed_averages(summary, strategy, false);
}

std::vector<double> per_seed_fast_averages(const BenchmarkSummary& summary,
                                           const std::string& strategy) {
    return per_seed_averages(summary, strategy, true);
}

void write_benchmark_csv(const BenchmarkSummary& summary, std::ostream& os) {
    os << "strategy,location,seed,fast_error_m,final_error_m\n";
    for (const auto& e : summary.entries) {
        if (e.failed) continue;
        os << e.strategy << ',' << e.location << ',' << e.seed << ',' << fmt_g9(e.fast_error_m)
           << ',' << fmt_g9(e.final_error_m) << '\n';
    }
}

std::string format_benchmark_table(const std::vector<StrategyScore>& rows) {
    std::ostringstream ss;
    auto cell = [&](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%9.2f", v);
        return std::string(buf);
    };
    ss << "Strategy          Fast 1    Fast 2    Fast 3  Fast Avg   Final 1   Final 2   Final 3 Final Avg\n";
    for (const auto& r : rows) {
        char name[32];
        std::snprintf(name, sizeof(name), "%-14s", r.strategy.c_str());
        ss << name << ' ' << cell(r.fast_median[0]) << ' ' << cell(r.fast_median[1]) << ' '
           << cell(r.fast_median[2]) << ' ' << cell(r.fast_average) << ' ' << cell(r.final_median[0])
           << ' ' << cell(r.final_median[1]) << ' ' << cell(r.final_median[2]) << ' '
           << cell(r.final_average) << '\n';
    }
    return ss.str();
}

std::string trajectory_geojson(const FlightLog& log, const ScoreReport& report,
                               const GeoPoint& rover) {
    using nlohmann::json;
    json path = json::array();
    for (const auto& r : log.records) path.push_back({r.lon, r.lat});

    auto point_feature = [](const char* role, const GeoPoint& p) {
        return nlohmann::json{{"type", "Feature"},
                              {"properties", {{"role", role}}},
                              {"geometry", {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}}};
    };
    json doc = {{"type", "FeatureCollection"},
                {"features",
                 {json{{"type", "Feature"},
                       {"properties", {{"role", "trajectory"}, {"strategy", report.strategy}}},
                       {"geometry", {{"type", "LineString"}, {"coordinates", path}}}},
                  point_feature("fast_estimate", report.fast_estimate),
                  point_feature("final_estimate", report.final_estimate),
                  point_feature("rover", rover)}}};
    return doc.dump(2) + "\n";
}

std::vector<PlotRow> error_series(const FlightLog& log, const GeoPoint& rover,
                                  double fast_deadline_s) {
    std::vector<PlotRow> rows;
    rows.reserve(log.records.size());
    bool marked = false;
    for (const auto& r : log.records) {
        PlotRow p;
        p.t = r.t;
        p.error_m = horizontal_distance({r.est_lat, r.est_lon, 0.0}, rover);
        if (!marked && std::abs(r.t - fast_deadline_s) < 1e-9) {
            p.fast_marker = true;
            marked = true;
        }
        rows.push_back(p);
    }
    return rows;
}

void write_error_series_csv(std::span<const PlotRow> rows, std::ostream& os) {
    os << "t,error_m,fast_marker\n";
    for (const auto& r : rows) {
        os << fmt_g9(r.t) << ',' << fmt_g9(r.error_m) << ',' << (r.fast_marker ? '1' : '0') << '\n';
    }
}

} // namespace afar
