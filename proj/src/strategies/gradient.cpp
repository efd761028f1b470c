// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/strategies.hpp"

#include <algorithm>
#include <cmath>

namespace afar {

namespace {
constexpr double kDirX[4] = {0.0, 1.0, 0.0, -1.0};
constexpr double kDirY[4] = {1.0, 0.0, -1.0, 0.0};
constexpr double kMinLegM = 1.0;
} // namespace

GradientStrategy::GradientStrategy(const EpisodeConfig& cfg)
    : params_(cfg.gradient),
      fence_(cfg.uav_fence),
      origin_(cfg.enu_origin()),
      interval_m_(cfg.gradient.interval_start_m) {}

WaypointCommand GradientStrategy::plan_leg(const GeoPoint& from) {
    const EnuPoint here = to_enu(from, origin_);
    // A leg that would cross a previously recorded boundary is shortened to
    // stop short of it; a fully blocked heading rotates clockwise.
    for (int attempt = 0; attempt < 4; ++attempt) {
        double len = interval_m_;
        const auto& b = boundary_[static_cast<size_t>(heading_)];
        if (b) {
            double allowed = 0.0;
            switch (heading_) {
                case 0: allowed = (*b - params_.boundary_margin_m) - here.y; break;  // N
                case 1: allowed = (*b - params_.boundary_margin_m) - here.x; break;  // E
                case 2: allowed = here.y - (*b + params_.boundary_margin_m); break;  // S
                case 3: allowed = here.x - (*b + params_.boundary_margin_m); break;  // W
            }
            len = std::min(len, allowed);
        }
        if (len < kMinLegM) {
            heading_ = (heading_ + 1) % 4;
            continue;
        }
        const EnuPoint tgt{here.x + len * kDirX[heading_], here.y + len * kDirY[heading_], 0.0};
        GeoPoint target = to_geo(tgt, origin_);
        target.alt = params_.cruise_alt_m;
        WaypointCommand cmd = clamp_command({target, params_.speed_mps}, fence_);
        target_ = cmd.target;
        return cmd;
    }
    // Boxed in on all four sides: forget the boundaries and restart.
    boundary_ = {};
    const EnuPoint tgt{here.x + interval_m_ * kDirX[heading_],
                       here.y + interval_m_ * kDirY[heading_], 0.0};
    GeoPoint target = to_geo(tgt, origin_);
    target.alt = params_.cruise_alt_m;
    WaypointCommand cmd = clamp_command({target, params_.speed_mps}, fence_);
    target_ = cmd.target;
    return cmd;
}

StrategyDecision GradientStrategy::on_measurement(const Measurement& m, const VehicleState& uav,
                                                  double /*t*/) {
    StrategyDecision dec;

    if (!started_) {
        started_ = true;
        leg_start_ = uav.pos;
        dec.command = plan_leg(uav.pos);
        return dec;
    }

    leg_sum_ += m.rssi_dbm;
    leg_count_ += 1;

    if (distance_3d(uav.pos, target_) > kDefaultWaypointTolM) return dec;

    const double leg_avg = leg_sum_ / leg_count_;
    if (!best_ || leg_avg > best_->rssi_dbm) {
        const EnuPoint mid = to_enu(leg_start_, origin_) * 0.5 + to_enu(uav.pos, origin_) * 0.5;
        GeoPoint mid_geo = to_geo(mid, origin_);
        mid_geo.alt = 0.0;
        best_ = Best{leg_avg, mid_geo};
        dec.estimate = mid_geo;
    }
    // The first completed leg only seeds the comparison; equal averages keep
    // the heading and the interval.
    if (prev_leg_avg_ && leg_avg > *prev_leg_avg_) {
        interval_m_ = std::min(interval_m_ + params_.momentum_step_m, params_.interval_max_m);
    } else if (prev_leg_avg_ && leg_avg < *prev_leg_avg_) {
        // Record the soft boundary at the coordinate where this heading went
        // bad, then turn and anneal.
        const EnuPoint here = to_enu(uav.pos, origin_);
        boundary_[static_cast<size_t>(heading_)] = (heading_ == 0 || heading_ == 2) ? here.y : here.x;
        heading_ = (heading_ + 1) % 4;
        interval_m_ = std::max(interval_m_ * params_.decay, params_.interval_min_m);
    }
    prev_leg_avg_ = leg_avg;
    leg_sum_ = 0.0;
    leg_count_ = 0;
    leg_start_ = uav.pos;
    dec.sample_accepted = true;
    dec.command = plan_leg(uav.pos);
    return dec;
}

} // namespace afar
