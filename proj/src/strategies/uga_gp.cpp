// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace afar {

UgaGpStrategy::UgaGpStrategy(const EpisodeConfig& cfg)
    : params_(cfg.uga_gp),
      gpc_(cfg.gp),
      fence_(cfg.uav_fence),
      rover_fence_(cfg.rover_fence),
      origin_(cfg.enu_origin()),
      qv_(cfg.sampling),
      qv_window_(cfg.sampling.qv_window),
      gp_(cfg.gp.kernel),
      guidance_grid_(cfg.uav_fence, cfg.gp.grid_nx, cfg.gp.grid_ny, origin_),
      estimate_grid_(cfg.rover_fence, cfg.gp.grid_nx, cfg.gp.grid_ny, origin_) {
    // Startup anchors: the three fence corners farthest from the start,
    // pulled toward the center, visited in corner-index order.
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 4; ++c) {
        const double d = horizontal_distance(rect_corner(fence_, c), cfg.start_pos);
        if (d < best) {
            best = d;
            nearest = c;
        }
    }
    const GeoPoint center = rect_center(fence_);
    for (int i = 1; i <= 3; ++i) {
        const int c = (nearest + i) % 4;
        GeoPoint corner = rect_corner(fence_, c);
        corner.lat += params_.corner_shrink * (center.lat - corner.lat);
        corner.lon += params_.corner_shrink * (center.lon - corner.lon);
        corner.alt = params_.cruise_alt_m;
        startup_targets_.push_back(corner);
    }
}

std::string_view UgaGpStrategy::phase() const {
    switch (phase_) {
        case Phase::Startup: return "startup";
        case Phase::Optimize: return "optimize";
        case Phase::Circle: return "circle";
    }
    return "optimize";
}

void UgaGpStrategy::command_to(StrategyDecision& dec, const GeoPoint& target) {
    WaypointCommand cmd = clamp_command({target, params_.speed_mps}, fence_);
    current_target_ = cmd.target;
    has_target_ = true;
    dec.command = cmd;
}

bool UgaGpStrategy::at_target(const VehicleState& uav) const {
    return has_target_ && distance_3d(uav.pos, current_target_) <= kDefaultWaypointTolM;
}

void UgaGpStrategy::refit(StrategyDecision& dec) {
    if (train_x_.empty()) return;
    gp_.fit(train_x_, train_y_);
    guidance_grid_.update(gp_, true);
    estimate_grid_.update(gp_, false);
    pending_ = 0;

    const GeoPoint est = estimate_peak(estimate_grid_);
    estimate_geo_ = est;
    dec.estimate = est;
    recent_estimates_.push_back(est);
    while (recent_estimates_.size() > static_cast<size_t>(params_.est_stable_count)) {
        recent_estimates_.pop_front();
    }
}

void UgaGpStrategy::maybe_enter_circle(StrategyDecision& dec) {
    if (recent_estimates_.size() < static_cast<size_t>(params_.est_stable_count)) return;
    for (size_t i = 0; i < recent_estimates_.size(); ++i) {
        for (size_t j = i + 1; j < recent_estimates_.size(); ++j) {
            if (horizontal_distance(recent_estimates_[i], recent_estimates_[j]) >
                params_.est_stable_m) {
                return;
            }
        }
    }
    // Consecutive estimates agree: ring the estimate with waypoints to firm
    // up the map around it.
    circle_targets_.clear();
    const EnuPoint center = to_enu(*estimate_geo_, origin_);
    for (int k = 0; k < params_.circle_points; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / params_.circle_points;
        const EnuPoint p{center.x + params_.circle_radius_m * std::sin(theta),
                         center.y + params_.circle_radius_m * std::cos(theta), 0.0};
        GeoPoint g = to_geo(p, origin_);
        g.alt = params_.cruise_alt_m;
        circle_targets_.push_back(clamp_to_rect(fence_, g));
    }
    circle_idx_ = 0;
    phase_ = Phase::Circle;
    recent_estimates_.clear();
    command_to(dec, circle_targets_[0]);
}

StrategyDecision UgaGpStrategy::on_measurement(const Measurement& m, const VehicleState& uav,
                                               double t) {
    StrategyDecision dec;

    // Non-overlapping windows of `qv_window` readings pass through the
    // quality-variance gate; an accepted window contributes its mean rssi at
    // the middle sample's position (deduplicated by a minimum spacing).
    window_.push_back(m);
    if (window_.size() > static_cast<size_t>(qv_window_)) window_.erase(window_.begin());
    since_batch_ += 1;
    if (since_batch_ >= qv_window_) {
        since_batch_ = 0;
        const auto d = qv_.evaluate(window_);
        if (d.accepted) {
            dec.sample_accepted = true;
            if (dwelling_) accepted_since_arrival_ = true;
            EnuPoint x = to_enu(window_[static_cast<size_t>(qv_window_ / 2)].rx_pos, origin_);
            x.z = 0.0;
            bool spaced = train_x_.size() < static_cast<size_t>(params_.max_train_points);
            for (const auto& p : train_x_) {
                if (!spaced) break;
                if ((p - x).norm2d() < params_.thin_spacing_m) spaced = false;
            }
            if (spaced) {
                train_x_.push_back(x);
                train_y_.push_back(d.avg_rssi_dbm);
                pending_ += 1;
            }
        } else {
            dec.sample_rejected = true;
        }
    }

    const bool startup_refit = phase_ == Phase::Startup && pending_ > 0;
    if (startup_refit || pending_ >= params_.refit_every || (at_target(uav) && pending_ > 0)) {
        refit(dec);
        if (phase_ == Phase::Optimize) {
            maybe_enter_circle(dec);
            if (phase_ == Phase::Optimize && guidance_grid_.populated()) {
                GeoPoint next = acquire_ucb(guidance_grid_, gpc_.ucb_kappa);
                next.alt = params_.cruise_alt_m;
                command_to(dec, next);
            }
        }
    }

    switch (phase_) {
        case Phase::Startup: {
            if (!first_sample_done_) {
                // Hover at the start until the starvation-escalating filter
                // accepts the first sample.
                if (qv_.ever_accepted()) {
                    first_sample_done_ = true;
                    dwelling_ = false;
                    command_to(dec, startup_targets_[0]);
                }
                break;
            }
            if (at_target(uav)) {
                if (!dwelling_) {
                    dwelling_ = true;
                    dwell_start_t_ = t;
                    accepted_since_arrival_ = false;
                } else if (accepted_since_arrival_ || t - dwell_start_t_ >= params_.dwell_timeout_s) {
                    dwelling_ = false;
                    startup_idx_ += 1;
                    if (startup_idx_ < startup_targets_.size()) {
                        command_to(dec, startup_targets_[startup_idx_]);
                    } else {
                        phase_ = Phase::Optimize;
                        if (guidance_grid_.populated()) {
                            GeoPoint next = acquire_ucb(guidance_grid_, gpc_.ucb_kappa);
                            next.alt = params_.cruise_alt_m;
                            command_to(dec, next);
                        }
                    }
                }
            }
            break;
        }
        case Phase::Optimize: {
            if (!has_target_ && guidance_grid_.populated()) {
                GeoPoint next = acquire_ucb(guidance_grid_, gpc_.ucb_kappa);
                next.alt = params_.cruise_alt_m;
                command_to(dec, next);
            }
            break;
        }
        case Phase::Circle: {
            if (at_target(uav)) {
                circle_idx_ += 1;
                if (circle_idx_ < circle_targets_.size()) {
                    command_to(dec, circle_targets_[circle_idx_]);
                } else {
                    phase_ = Phase::Optimize;
                    if (guidance_grid_.populated()) {
                        GeoPoint next = acquire_ucb(guidance_grid_, gpc_.ucb_kappa);
                        next.alt = params_.cruise_alt_m;
                        command_to(dec, next);
                    }
                }
            }
            break;
        }
    }
    return dec;
}

void UgaGpStrategy::finalize_radio_map() {
    if (train_x_.empty()) return;
    gp_.fit(train_x_, train_y_);
    estimate_grid_.update(gp_, true);
}

} // namespace afar
