// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace afar {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw ConfigError(key, msg);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (auto k : allowed) {
            if (it.key() == k) { known = true; break; }
        }
        if (!known) fail(join(path, it.key()), "unknown key");
    }
}

void get_num(const json& j, const std::string& path, const char* key, double& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    out = v.get<double>();
}

void get_int(const json& j, const std::string& path, const char* key, int& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    out = v.get<int>();
}

void get_u64(const json& j, const std::string& path, const char* key, uint64_t& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<int64_t>() < 0 && !v.is_number_unsigned()))
        fail(join(path, key), "expected a non-negative integer");
    out = v.get<uint64_t>();
}

void get_bool(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_boolean()) fail(join(path, key), "expected a boolean");
    out = v.get<bool>();
}

void get_str(const json& j, const std::string& path, const char* key, std::string& out) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    out = v.get<std::string>();
}

GeoPoint parse_point(const json& j, const std::string& path) {
    check_keys(j, path, {"lat", "lon", "alt"});
    if (!j.contains("lat") || !j.contains("lon")) fail(path, "needs lat and lon");
    GeoPoint p;
    get_num(j, path, "lat", p.lat);
    get_num(j, path, "lon", p.lon);
    get_num(j, path, "alt", p.alt);
    return p;
}

void parse_rect(const json& j, const std::string& path, GeoRect& r) {
    check_keys(j, path, {"south", "west", "north", "east", "alt_min", "alt_max"});
    get_num(j, path, "south", r.south);
    get_num(j, path, "west", r.west);
    get_num(j, path, "north", r.north);
    get_num(j, path, "east", r.east);
    get_num(j, path, "alt_min", r.alt_min);
    get_num(j, path, "alt_max", r.alt_max);
}

void parse_channel(const json& j, const std::string& path, ChannelParams& c) {
    check_keys(j, path, {"profile", "freq_hz", "tx_power_dbm", "noise_sigma_db", "fades_enabled",
                         "fade_depth_min_db", "fade_depth_max_db", "fade_enter_prob",
                         "fade_exit_prob", "overhead_null_db", "tilt_penalty_db_per_deg",
                         "noise_floor_dbm"});
    // Profile first; explicit fields override it.
    std::string profile;
    get_str(j, path, "profile", profile);
    if (!profile.empty()) {
        auto p = profile_by_name(profile);
        if (!p) fail(join(path, "profile"), "unknown profile (use \"emulator\" or \"testbed\")");
        c = *p;
    }
    get_num(j, path, "freq_hz", c.freq_hz);
    get_num(j, path, "tx_power_dbm", c.tx_power_dbm);
    get_num(j, path, "noise_sigma_db", c.noise_sigma_db);
    get_bool(j, path, "fades_enabled", c.fades_enabled);
    get_num(j, path, "fade_depth_min_db", c.fade_depth_min_db);
    get_num(j, path, "fade_depth_max_db", c.fade_depth_max_db);
    get_num(j, path, "fade_enter_prob", c.fade_enter_prob);
    get_num(j, path, "fade_exit_prob", c.fade_exit_prob);
    get_num(j, path, "overhead_null_db", c.overhead_null_db);
    get_num(j, path, "tilt_penalty_db_per_deg", c.tilt_penalty_db_per_deg);
    get_num(j, path, "noise_floor_dbm", c.noise_floor_dbm);
}

void parse_sampling(const json& j, const std::string& path, SamplingParams& s) {
    check_keys(j, path, {"buffer_capacity", "buffer_period_s", "qv_window", "qv_threshold", "qv_escalation"});
    get_int(j, path, "buffer_capacity", s.buffer_capacity);
    get_num(j, path, "buffer_period_s", s.buffer_period_s);
    get_int(j, path, "qv_window", s.qv_window);
    get_num(j, path, "qv_threshold", s.qv_threshold);
    get_num(j, path, "qv_escalation", s.qv_escalation);
}

void parse_gp(const json& j, const std::string& path, GpConfig& g) {
    check_keys(j, path, {"lengthscale_m", "signal_var", "noise_var", "prior_mean_dbm",
                         "grid_nx", "grid_ny", "ucb_kappa"});
    get_num(j, path, "lengthscale_m", g.kernel.lengthscale_m);
    get_num(j, path, "signal_var", g.kernel.signal_var);
    get_num(j, path, "noise_var", g.kernel.noise_var);
    get_num(j, path, "prior_mean_dbm", g.kernel.prior_mean_dbm);
    get_int(j, path, "grid_nx", g.grid_nx);
    get_int(j, path, "grid_ny", g.grid_ny);
    get_num(j, path, "ucb_kappa", g.ucb_kappa);
}

void parse_strategies(const json& j, const std::string& path, EpisodeConfig& cfg) {
    check_keys(j, path, {"baseline", "gradient", "nyu_bo", "unt_recursive", "uga_gp"});
    if (j.contains("baseline")) {
        const std::string p = join(path, "baseline");
        const auto& b = j.at("baseline");
        check_keys(b, p, {"leg_m", "speed_mps", "cruise_alt_m"});
        get_num(b, p, "leg_m", cfg.baseline.leg_m);
        get_num(b, p, "speed_mps", cfg.baseline.speed_mps);
        get_num(b, p, "cruise_alt_m", cfg.baseline.cruise_alt_m);
    }
    if (j.contains("gradient")) {
        const std::string p = join(path, "gradient");
        const auto& g = j.at("gradient");
        check_keys(g, p, {"interval_start_m", "interval_min_m", "interval_max_m", "decay",
                          "momentum_step_m", "boundary_margin_m", "speed_mps", "cruise_alt_m"});
        get_num(g, p, "interval_start_m", cfg.gradient.interval_start_m);
        get_num(g, p, "interval_min_m", cfg.gradient.interval_min_m);
        get_num(g, p, "interval_max_m", cfg.gradient.interval_max_m);
        get_num(g, p, "decay", cfg.gradient.decay);
        get_num(g, p, "momentum_step_m", cfg.gradient.momentum_step_m);
        get_num(g, p, "boundary_margin_m", cfg.gradient.boundary_margin_m);
        get_num(g, p, "speed_mps", cfg.gradient.speed_mps);
        get_num(g, p, "cruise_alt_m", cfg.gradient.cruise_alt_m);
    }
    if (j.contains("nyu_bo")) {
        const std::string p = join(path, "nyu_bo");
        const auto& n = j.at("nyu_bo");
        check_keys(n, p, {"edge_speed_mps", "cruise_alt_m", "edge_deadline_s", "train_bin_s",
                          "refit_every", "zoom_after_s", "zoom_radius_m", "boundary_pin_tol_m",
                          "boundary_pin_count", "probe_min_time_s", "probe_leg_m",
                          "probe_speed_mps"});
        get_num(n, p, "edge_speed_mps", cfg.nyu_bo.edge_speed_mps);
        get_num(n, p, "cruise_alt_m", cfg.nyu_bo.cruise_alt_m);
        get_num(n, p, "edge_deadline_s", cfg.nyu_bo.edge_deadline_s);
        get_num(n, p, "train_bin_s", cfg.nyu_bo.train_bin_s);
        get_int(n, p, "refit_every", cfg.nyu_bo.refit_every);
        get_num(n, p, "zoom_after_s", cfg.nyu_bo.zoom_after_s);
        get_num(n, p, "zoom_radius_m", cfg.nyu_bo.zoom_radius_m);
        get_num(n, p, "boundary_pin_tol_m", cfg.nyu_bo.boundary_pin_tol_m);
        get_int(n, p, "boundary_pin_count", cfg.nyu_bo.boundary_pin_count);
        get_num(n, p, "probe_min_time_s", cfg.nyu_bo.probe_min_time_s);
        get_num(n, p, "probe_leg_m", cfg.nyu_bo.probe_leg_m);
        get_num(n, p, "probe_speed_mps", cfg.nyu_bo.probe_speed_mps);
    }
    if (j.contains("unt_recursive")) {
        const std::string p = join(path, "unt_recursive");
        const auto& u = j.at("unt_recursive");
        check_keys(u, p, {"max_depth", "speed_mps", "cruise_alt_m"});
        get_int(u, p, "max_depth", cfg.unt_recursive.max_depth);
        get_num(u, p, "speed_mps", cfg.unt_recursive.speed_mps);
        get_num(u, p, "cruise_alt_m", cfg.unt_recursive.cruise_alt_m);
    }
    if (j.contains("uga_gp")) {
        const std::string p = join(path, "uga_gp");
        const auto& u = j.at("uga_gp");
        check_keys(u, p, {"corner_shrink", "circle_radius_m", "circle_points", "est_stable_m",
                          "est_stable_count", "speed_mps", "cruise_alt_m", "dwell_timeout_s",
                          "thin_spacing_m", "max_train_points", "refit_every"});
        get_num(u, p, "corner_shrink", cfg.uga_gp.corner_shrink);
        get_num(u, p, "circle_radius_m", cfg.uga_gp.circle_radius_m);
        get_int(u, p, "circle_points", cfg.uga_gp.circle_points);
        get_num(u, p, "est_stable_m", cfg.uga_gp.est_stable_m);
        get_int(u, p, "est_stable_count", cfg.uga_gp.est_stable_count);
        get_num(u, p, "speed_mps", cfg.uga_gp.speed_mps);
        get_num(u, p, "cruise_alt_m", cfg.uga_gp.cruise_alt_m);
        get_num(u, p, "dwell_timeout_s", cfg.uga_gp.dwell_timeout_s);
        get_num(u, p, "thin_spacing_m", cfg.uga_gp.thin_spacing_m);
        get_int(u, p, "max_train_points", cfg.uga_gp.max_train_points);
        get_int(u, p, "refit_every", cfg.uga_gp.refit_every);
    }
}

bool is_multiple(double value, double base) {
    if (base <= 0.0) return false;
    const double k = std::round(value / base);
    return std::abs(k * base - value) < 1e-9;
}

void validate_rect(const GeoRect& r, const std::string& key) {
    if (!(r.south < r.north)) fail(key + ".south", "south must be < north");
    if (!(r.west < r.east)) fail(key + ".west", "west must be < east");
    if (!(r.alt_min < r.alt_max)) fail(key + ".alt_min", "alt_min must be < alt_max");
    if (r.south < -90.0 || r.north > 90.0) fail(key, "latitude out of [-90, 90]");
    if (r.west < -180.0 || r.east > 180.0) fail(key, "longitude out of [-180, 180]");
}

void validate_point(const GeoPoint& p, const std::string& key) {
    if (!std::isfinite(p.lat) || p.lat < -90.0 || p.lat > 90.0) fail(key + ".lat", "out of [-90, 90]");
    if (!std::isfinite(p.lon) || p.lon < -180.0 || p.lon > 180.0) fail(key + ".lon", "out of [-180, 180]");
    if (!std::isfinite(p.alt) || p.alt < 0.0) fail(key + ".alt", "must be >= 0");
}

} // namespace

void EpisodeConfig::validate(bool require_rover) const {
    validate_rect(uav_fence, "uav_fence");
    validate_rect(rover_fence, "rover_fence");
    validate_point(start_pos, "start_pos");
    if (!contains(uav_fence, start_pos, true)) fail("start_pos", "outside the UAV fence");
    if (require_rover && !rover_pos) fail("rover_pos", "missing (an episode needs a hiding spot)");
    if (rover_pos) {
        validate_point(*rover_pos, "rover_pos");
        if (!contains(rover_fence, *rover_pos, false)) fail("rover_pos", "outside the rover fence");
    }
    for (size_t i = 0; i < locations.size(); ++i) {
        const std::string key = "locations[" + std::to_string(i) + "]";
        validate_point(locations[i], key);
        if (!contains(rover_fence, locations[i], false)) fail(key, "outside the rover fence");
    }

    if (!(dt > 0.0)) fail("dt", "must be positive");
    if (!(duration_s > 0.0)) fail("duration_s", "must be positive");
    if (fast_deadline_s > duration_s) fail("fast_deadline_s", "must be <= duration_s");
    if (!is_multiple(sample_period_s, dt)) fail("sample_period_s", "must be a multiple of dt");
    if (!is_multiple(fast_deadline_s, sample_period_s))
        fail("fast_deadline_s", "must be a multiple of sample_period_s");
    if (!is_multiple(duration_s, sample_period_s))
        fail("duration_s", "must be a multiple of sample_period_s");

    if (!(channel.freq_hz > 0.0)) fail("channel.freq_hz", "must be positive");
    if (channel.noise_sigma_db < 0.0) fail("channel.noise_sigma_db", "must be >= 0");
    if (channel.fade_depth_min_db > channel.fade_depth_max_db)
        fail("channel.fade_depth_min_db", "must be <= fade_depth_max_db");
    if (channel.fade_enter_prob < 0.0 || channel.fade_enter_prob > 1.0)
        fail("channel.fade_enter_prob", "must lie in [0, 1]");
    if (channel.fade_exit_prob < 0.0 || channel.fade_exit_prob > 1.0)
        fail("channel.fade_exit_prob", "must lie in [0, 1]");

    if (sampling.buffer_capacity < 1) fail("sampling.buffer_capacity", "must be >= 1");
    if (sampling.qv_window < 2) fail("sampling.qv_window", "must be >= 2");
    if (!(sampling.qv_threshold > 0.0)) fail("sampling.qv_threshold", "must be positive");
    if (!(sampling.qv_escalation > 1.0)) fail("sampling.qv_escalation", "must be > 1");

    if (gp.kernel.lengthscale_m <= 1.0 || gp.kernel.lengthscale_m >= 1000.0)
        fail("gp.lengthscale_m", "must lie in (1, 1000)");
    if (!(gp.kernel.signal_var > 0.0)) fail("gp.signal_var", "must be positive");
    if (!(gp.kernel.noise_var > 0.0)) fail("gp.noise_var", "must be positive");
    if (gp.grid_nx < 2 || gp.grid_ny < 2) fail("gp.grid_nx", "grid must be at least 2x2");
    if (gp.ucb_kappa < 0.0) fail("gp.ucb_kappa", "must be >= 0");

    static constexpr std::string_view kNames[] = {"baseline", "gradient", "nyu_bo",
                                                  "unt_recursive", "uga_gp"};
    bool known = false;
    for (auto n : kNames) known = known || strategy == n;
    if (!known)
        fail("strategy", "unknown strategy \"" + strategy +
                             "\" (use baseline|gradient|nyu_bo|unt_recursive|uga_gp)");
}

EpisodeConfig default_config() {
    EpisodeConfig cfg;
    const GeoPoint origin{35.7275, -78.696, 0.0};
    auto rect_from_enu = [&](double x0, double y0, double x1, double y1, double alt_min,
                             double alt_max) {
        const GeoPoint sw = to_geo({x0, y0, 0.0}, origin);
        const GeoPoint ne = to_geo({x1, y1, 0.0}, origin);
        return GeoRect{sw.lat, sw.lon, ne.lat, ne.lon, alt_min, alt_max};
    };
    cfg.uav_fence = rect_from_enu(0.0, 0.0, 300.0, 300.0, 20.0, 110.0);
    cfg.rover_fence = rect_from_enu(60.0, 0.0, 360.0, 300.0, 0.0, 110.0);
    cfg.start_pos = GeoPoint{cfg.uav_fence.south, cfg.uav_fence.west, 50.0};
    cfg.channel = emulator_profile();
    cfg.locations = {to_geo({80.0, 70.0, 0.0}, origin),    // L1: near the start corner
                     to_geo({270.0, 260.0, 0.0}, origin),  // L2: far, close to the NE edges
                     to_geo({340.0, 150.0, 0.0}, origin)}; // L3: beyond the east UAV fence edge
    return cfg;
}

EpisodeConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("<config>", std::string("invalid JSON: ") + e.what());
    }
    EpisodeConfig cfg = default_config();
    check_keys(j, "", {"uav_fence", "rover_fence", "rover_pos", "start_pos", "channel",
                       "strategy", "seed", "dt", "duration_s", "fast_deadline_s",
                       "sample_period_s", "sampling", "gp", "strategies", "locations"});
    if (j.contains("uav_fence")) parse_rect(j.at("uav_fence"), "uav_fence", cfg.uav_fence);
    if (j.contains("rover_fence")) parse_rect(j.at("rover_fence"), "rover_fence", cfg.rover_fence);
    if (j.contains("rover_pos")) cfg.rover_pos = parse_point(j.at("rover_pos"), "rover_pos");
    if (j.contains("start_pos")) cfg.start_pos = parse_point(j.at("start_pos"), "start_pos");
    if (j.contains("channel")) parse_channel(j.at("channel"), "channel", cfg.channel);
    get_str(j, "", "strategy", cfg.strategy);
    get_u64(j, "", "seed", cfg.seed);
    get_num(j, "", "dt", cfg.dt);
    get_num(j, "", "duration_s", cfg.duration_s);
    get_num(j, "", "fast_deadline_s", cfg.fast_deadline_s);
    get_num(j, "", "sample_period_s", cfg.sample_period_s);
    if (j.contains("sampling")) parse_sampling(j.at("sampling"), "sampling", cfg.sampling);
    if (j.contains("gp")) parse_gp(j.at("gp"), "gp", cfg.gp);
    if (j.contains("strategies")) parse_strategies(j.at("strategies"), "strategies", cfg);
    if (j.contains("locations")) {
        const auto& locs = j.at("locations");
        if (!locs.is_array() || locs.size() != 3) fail("locations", "expected exactly 3 points");
        for (size_t i = 0; i < 3; ++i) {
            cfg.locations[i] = parse_point(locs[i], "locations[" + std::to_string(i) + "]");
        }
    }
    return cfg;
}

EpisodeConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("<config>", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

} // namespace afar
