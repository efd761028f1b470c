// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace afar {

namespace {
constexpr double kSpeedOfLightMps = 299792458.0;
constexpr double kMinDistanceM = 1.0;
} // namespace

ChannelParams emulator_profile() {
    ChannelParams p;
    p.noise_sigma_db = 10.0;
    p.fades_enabled = false;
    return p;
}

ChannelParams testbed_profile() {
    // Everything the emulator has plus burst fades; the field was strictly
    // noisier than the digital twin, so sigma stays at the emulator level.
    ChannelParams p;
    p.noise_sigma_db = 10.0;
    p.fades_enabled = true;
    return p;
}

std::optional<ChannelParams> profile_by_name(std::string_view name) {
    if (name == "emulator") return emulator_profile();
    if (name == "testbed") return testbed_profile();
    return std::nullopt;
}

FadeState make_channel_state(uint64_t master_seed) {
    FadeState s;
    s.fade_rng.seed(master_seed, "channel/fade");
    s.noise_rng.seed(master_seed, "channel/noise");
    return s;
}

double fspl_db(double distance_m, double freq_hz) {
    const double d = std::max(distance_m, kMinDistanceM);
    return 20.0 * std::log10(4.0 * std::numbers::pi * d * freq_hz / kSpeedOfLightMps);
}

double antenna_gain_db(const EnuPoint& rx_rel_tx, double tilt_deg, const ChannelParams& p) {
    const double elev_deg = rad2deg(std::atan2(rx_rel_tx.z, rx_rel_tx.norm2d()));
    const double null_penalty = p.overhead_null_db * std::max(0.0, (elev_deg - 60.0) / 30.0);
    return -(null_penalty + p.tilt_penalty_db_per_deg * tilt_deg);
}

Measurement sample_measurement(const GeoPoint& tx, const GeoPoint& rx, double tilt_deg,
                               const ChannelParams& p, FadeState& state, double t) {
    const EnuPoint rel = to_enu(rx, tx);
    double rssi = p.tx_power_dbm - fspl_db(rel.norm(), p.freq_hz) + antenna_gain_db(rel, tilt_deg, p);

    if (p.fades_enabled) {
        if (state.in_fade) {
            if (state.fade_rng.bernoulli(p.fade_exit_prob)) {
                state.in_fade = false;
                state.depth_db = 0.0;
            }
        } else if (state.fade_rng.bernoulli(p.fade_enter_prob)) {
            state.in_fade = true;
            state.depth_db = state.fade_rng.uniform(p.fade_depth_min_db, p.fade_depth_max_db);
        }
        rssi -= state.depth_db;
    }

    rssi += p.noise_sigma_db * state.noise_rng.gaussian();
    rssi = std::max(rssi, p.noise_floor_dbm);

    double confidence = std::clamp((rssi - p.noise_floor_dbm) / 40.0, 0.0, 1.0);
    if (p.fades_enabled && state.in_fade) {
        // Receiver loses lock during dropout: quality score collapses.
        confidence *= state.fade_rng.uniform(0.2, 0.6);
    }

    return Measurement{t, rx, rssi, confidence};
}

} // namespace afar
