// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/strategies.hpp"

#include <cmath>

namespace afar {

namespace {
// Cardinal unit vectors, N/E/S/W; a decrease turns +90 degrees clockwise.
constexpr double kDirX[4] = {0.0, 1.0, 0.0, -1.0};
constexpr double kDirY[4] = {1.0, 0.0, -1.0, 0.0};
} // namespace

BaselineStrategy::BaselineStrategy(const EpisodeConfig& cfg)
    : params_(cfg.baseline), fence_(cfg.uav_fence), origin_(cfg.enu_origin()) {}

WaypointCommand BaselineStrategy::leg_command(const GeoPoint& from) {
    const EnuPoint here = to_enu(from, origin_);
    const EnuPoint tgt{here.x + params_.leg_m * kDirX[heading_], here.y + params_.leg_m * kDirY[heading_],
                       0.0};
    GeoPoint target = to_geo(tgt, origin_);
    target.alt = params_.cruise_alt_m;
    WaypointCommand cmd{target, params_.speed_mps};
    cmd = clamp_command(cmd, fence_);  // mirror the vehicle-side clamp so arrival detection agrees
    target_ = cmd.target;
    return cmd;
}

StrategyDecision BaselineStrategy::on_measurement(const Measurement& m, const VehicleState& uav,
                                                  double /*t*/) {
    StrategyDecision dec;

    if (!started_) {
        started_ = true;
        leg_start_ = uav.pos;
        dec.command = leg_command(uav.pos);
        return dec;
    }

    leg_sum_ += m.rssi_dbm;
    leg_count_ += 1;

    if (distance_3d(uav.pos, target_) > kDefaultWaypointTolM) return dec;

    // Leg complete: compare its average against the previous leg. The
    // estimate tracks the midpoint of the best-average leg so far.
    const double leg_avg = leg_sum_ / leg_count_;
    if (!best_ || leg_avg > best_->rssi_dbm) {
        const EnuPoint mid = to_enu(leg_start_, origin_) * 0.5 + to_enu(uav.pos, origin_) * 0.5;
        GeoPoint mid_geo = to_geo(mid, origin_);
        mid_geo.alt = 0.0;
        best_ = Best{leg_avg, mid_geo};
        dec.estimate = mid_geo;
    }
    if (prev_leg_avg_ && leg_avg < *prev_leg_avg_) {
        heading_ = (heading_ + 1) % 4;  // equal readings keep the heading
    }
    prev_leg_avg_ = leg_avg;
    leg_sum_ = 0.0;
    leg_count_ = 0;
    leg_start_ = uav.pos;
    dec.sample_accepted = true;
    dec.command = leg_command(uav.pos);
    return dec;
}

} // namespace afar
