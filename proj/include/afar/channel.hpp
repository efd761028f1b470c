// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "afar/geodesy.hpp"
#include "afar/rng.hpp"

namespace afar {

/// Propagation and impairment knobs. The defaults correspond to the
/// "emulator" profile: free-space loss plus 10 dB-sigma white noise in the
/// dB domain, no burst fades.
struct ChannelParams {
    double freq_hz = 3.4e9;
    double tx_power_dbm = 20.0;
    double noise_sigma_db = 10.0;          // std-dev of dB-domain white noise
    bool fades_enabled = false;
    double fade_depth_min_db = 30.0;       // burst-fade depth range
    double fade_depth_max_db = 40.0;
    double fade_enter_prob = 0.05;         // per-sample Markov transitions
    double fade_exit_prob = 0.30;
    double overhead_null_db = 10.0;        // max gain penalty directly overhead
    double tilt_penalty_db_per_deg = 0.3;  // penalty per degree of motion tilt
    double noise_floor_dbm = -95.0;
};

/// Clean digital-twin profile: sigma = 10 dB, no fades.
ChannelParams emulator_profile();
/// Field-like profile: sigma = 5 dB plus 30-40 dB Markov burst fades.
ChannelParams testbed_profile();
std::optional<ChannelParams> profile_by_name(std::string_view name);

/// One receiver reading: signal strength plus a quality score.
struct Measurement {
    double t = 0.0;          // seconds since episode start
    GeoPoint rx_pos;         // receiver position when sampled
    double rssi_dbm = 0.0;   // >= noise floor
    double confidence = 0.0; // [0, 1]
};

/// Stochastic channel state: the two-state burst-fade Markov chain plus the
/// named random streams all channel draws come from. sample_measurement is a
/// pure transition function over this state; episodes own their own copy.
struct FadeState {
    bool in_fade = false;
    double depth_db = 0.0;  // in [fade_depth_min, fade_depth_max] while in_fade, else 0
    RngStream fade_rng;
    RngStream noise_rng;
};

FadeState make_channel_state(uint64_t master_seed);

/// Free-space path loss in dB: 20*log10(4*pi*d*f/c). Distance is clamped to
/// 1 m to avoid the near-field singularity; legal flight never gets close.
double fspl_db(double distance_m, double freq_hz);

/// Non-positive antenna gain for a receiver at `rx_rel_tx` (ENU offset seen
/// from the transmitter): a linear overhead-null ramp starting at 60 deg
/// elevation, plus a per-degree motion-tilt penalty.
double antenna_gain_db(const EnuPoint& rx_rel_tx, double tilt_deg, const ChannelParams& p);

/// Draw one measurement and advance the fade chain by one step.
Measurement sample_measurement(const GeoPoint& tx, const GeoPoint& rx, double tilt_deg,
                               const ChannelParams& p, FadeState& state, double t);

} // namespace afar
