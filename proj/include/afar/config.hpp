// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "afar/channel.hpp"
#include "afar/geodesy.hpp"
#include "afar/gp.hpp"
#include "afar/sampling.hpp"

namespace afar {

/// Configuration problem tied to a specific key; the CLI maps these to
/// exit code 2 with the key in the message.
struct ConfigError : std::runtime_error {
    ConfigError(std::string key_, const std::string& msg)
        : std::runtime_error(key_ + ": " + msg), key(std::move(key_)) {}
    std::string key;
};

struct BaselineParams {
    double leg_m = 40.0;
    double speed_mps = 10.0;
    double cruise_alt_m = 30.0;
};

struct GradientParams {
    double interval_start_m = 40.0;
    double interval_min_m = 5.0;
    double interval_max_m = 80.0;
    double decay = 0.9;            // interval multiplier on a decrease
    double momentum_step_m = 5.0;  // added per consecutive improvement
    double boundary_margin_m = 10.0;
    double speed_mps = 10.0;
    double cruise_alt_m = 30.0;
};

struct NyuBoParams {
    double edge_speed_mps = 10.0;
    double cruise_alt_m = 20.0;
    double edge_deadline_s = 150.0;  // hard cap on the edge traverse
    double train_bin_s = 2.0;        // raw samples are averaged into bins this long
    int refit_every = 8;             // refit after this many new training bins
    double zoom_after_s = 300.0;     // then acquisition zooms in around the estimate
    double zoom_radius_m = 60.0;
    double boundary_pin_tol_m = 12.0;
    int boundary_pin_count = 3;
    double probe_min_time_s = 210.0; // no probing before the map has settled
    double probe_leg_m = 60.0;
    double probe_speed_mps = 3.0;
};

struct UntParams {
    int max_depth = 4;
    double speed_mps = 10.0;
    // Sweeps hug the fence floor: the antenna null directly above the rover
    // pushes each edge's power maximum onto a ring of radius alt/tan(60deg),
    // so lower flight tightens the chord intersection.
    double cruise_alt_m = 20.0;
};

struct UgaParams {
    double corner_shrink = 0.2;    // startup corners pulled toward center
    double circle_radius_m = 40.0;
    int circle_points = 8;
    double est_stable_m = 15.0;    // estimate agreement that triggers the circle
    int est_stable_count = 3;
    double speed_mps = 10.0;
    double cruise_alt_m = 30.0;
    double dwell_timeout_s = 10.0; // max hover wait for an accepted startup sample
    double thin_spacing_m = 8.0;   // min distance between training points
    int max_train_points = 400;
    int refit_every = 10;
};

struct GpConfig {
    KernelParams kernel;
    int grid_nx = 30;
    int grid_ny = 30;
    double ucb_kappa = 2.0;
};

/// Everything one simulated run needs. Strategy parameter tables ride along
/// so a single config file describes any strategy.
struct EpisodeConfig {
    GeoRect uav_fence;
    GeoRect rover_fence;
    std::optional<GeoPoint> rover_pos;  // required to run an episode
    GeoPoint start_pos;
    ChannelParams channel;
    std::string strategy = "baseline";
    uint64_t seed = 1;
    double dt = 0.1;
    double duration_s = 600.0;
    double fast_deadline_s = 180.0;
    double sample_period_s = 0.2;
    SamplingParams sampling;
    GpConfig gp;
    BaselineParams baseline;
    GradientParams gradient;
    NyuBoParams nyu_bo;
    UntParams unt_recursive;
    UgaParams uga_gp;
    std::array<GeoPoint, 3> locations;  // benchmark hiding spots L1..L3

    /// SW corner of the UAV fence at ground level; the shared local frame.
    GeoPoint enu_origin() const { return {uav_fence.south, uav_fence.west, 0.0}; }

    /// Throws ConfigError naming the offending key. Episode runs additionally
    /// require rover_pos (pass require_rover = true).
    void validate(bool require_rover = true) const;
};

/// Synthetic benchmark geometry: a 300 m square UAV fence (20-110 m altitude
/// band), a rover fence of the same size shifted 60 m east so a strip of it
/// is unreachable, start at the UAV-fence SW corner at 50 m, and three hiding
/// spots of increasing difficulty (near start, far corner near an edge, and
/// beyond the east fence edge). rover_pos is left unset.
EpisodeConfig default_config();

/// Loads a JSON config file over the defaults. Unknown keys and type
/// mismatches raise ConfigError with the full key path.
EpisodeConfig load_config_file(const std::string& path);
EpisodeConfig parse_config_json(const std::string& text);

} // namespace afar
