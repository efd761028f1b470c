// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace afar {

namespace {
// Sweep legs are paced so each edge yields on the order of eight buffer
// averages (one per capacity * period seconds); the per-edge argmax position
// can only be as sharp as the spacing between averages. Transits between
// rectangles fly at full speed.
double leg_speed(double leg_len_m, double max_speed, double window_s) {
    return std::clamp(leg_len_m / (8.0 * window_s), 2.0, std::min(0.8 * max_speed, max_speed));
}
} // namespace

UntRecursiveStrategy::UntRecursiveStrategy(const EpisodeConfig& cfg)
    : params_(cfg.unt_recursive),
      fence_(cfg.uav_fence),
      origin_(cfg.enu_origin()),
      buffer_(cfg.sampling.buffer_capacity, cfg.sampling.buffer_period_s),
      buffer_window_s_(cfg.sampling.buffer_capacity * cfg.sampling.buffer_period_s) {
    const auto overlap = rect_overlap(cfg.uav_fence, cfg.rover_fence);
    if (!overlap) throw ConfigError("rover_fence", "does not overlap the UAV fence");
    rect_ = *overlap;
}

std::string_view UntRecursiveStrategy::phase() const {
    switch (phase_) {
        case Phase::Approach: return "approach";
        case Phase::Sweep: return "sweep";
        case Phase::Descend: return "descend";
        case Phase::Hold: return "hold";
    }
    return "hold";
}

void UntRecursiveStrategy::command_corner(StrategyDecision& dec, int corner_idx, bool transit) {
    GeoPoint corner = rect_corner(rect_, corner_idx);
    corner.alt = params_.cruise_alt_m;
    const double len = horizontal_distance(target_, corner);
    const double speed =
        transit ? params_.speed_mps : leg_speed(len, params_.speed_mps, buffer_window_s_);
    WaypointCommand cmd = clamp_command({corner, speed}, fence_);
    target_ = cmd.target;
    dec.command = cmd;
}

void UntRecursiveStrategy::complete_sweep(const VehicleState& uav, StrategyDecision& dec) {
    if (getenv("AFAR_UNT_DEBUG") != nullptr) {
        auto pr = [&](const char* name, const std::optional<EdgeBest>& b) {
            if (b) {
                const EnuPoint p = to_enu(b->pos, origin_);
                fprintf(stderr, "  %s: rssi=%.2f at (%.1f, %.1f)\n", name, b->rssi_dbm, p.x, p.y);
            } else {
                fprintf(stderr, "  %s: none\n", name);
            }
        };
        const EnuPoint sw = to_enu(rect_corner(rect_, 0), origin_);
        const EnuPoint ne = to_enu(rect_corner(rect_, 2), origin_);
        fprintf(stderr, "sweep depth=%d rect=(%.1f,%.1f)-(%.1f,%.1f)\n", depth_, sw.x, sw.y, ne.x,
                ne.y);
        pr("S", edge_best_[0]);
        pr("E", edge_best_[1]);
        pr("N", edge_best_[2]);
        pr("W", edge_best_[3]);
    }
    // Chords join the per-edge maxima of opposite edges; their crossing is
    // the guess. Missing edges or non-crossing chords fall back to the
    // position of the strongest averaged reading of this sweep.
    const auto& s = edge_best_[0];
    const auto& e = edge_best_[1];
    const auto& n = edge_best_[2];
    const auto& w = edge_best_[3];
    std::optional<GeoPoint> guess;
    if (s && e && n && w) {
        const Segment vertical{to_enu(n->pos, origin_), to_enu(s->pos, origin_)};
        const Segment lateral{to_enu(e->pos, origin_), to_enu(w->pos, origin_)};
        if (const auto hit = segment_intersection(vertical, lateral)) {
            guess = to_geo(*hit, origin_);
            guess->alt = 0.0;
        }
    }
    if (!guess && sweep_best_) guess = GeoPoint{sweep_best_->pos.lat, sweep_best_->pos.lon, 0.0};
    if (guess) {
        estimate_ = guess;
        dec.estimate = guess;
    }

    if (depth_ >= params_.max_depth || !sweep_best_) {
        phase_ = Phase::Hold;
        return;
    }

    // Descend into the quadrant whose corner is nearest the strongest
    // reading, entering at the corner closest to the current position.
    const EnuPoint hot = to_enu(sweep_best_->pos, origin_);
    int hot_corner = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 4; ++c) {
        const double d = (to_enu(rect_corner(rect_, c), origin_) - hot).norm2d();
        if (d < best_d) {
            best_d = d;
            hot_corner = c;
        }
    }
    rect_ = rect_quadrant(rect_, hot_corner);
    depth_ += 1;
    edge_best_ = {};
    sweep_best_.reset();

    int entry = 0;
    best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 4; ++c) {
        const double d = horizontal_distance(rect_corner(rect_, c), uav.pos);
        if (d < best_d) {
            best_d = d;
            entry = c;
        }
    }
    start_corner_ = entry;
    phase_ = Phase::Descend;
    command_corner(dec, entry, true);
}

StrategyDecision UntRecursiveStrategy::on_measurement(const Measurement& m,
                                                      const VehicleState& uav, double /*t*/) {
    StrategyDecision dec;

    const auto avg = buffer_.push(m);
    if (avg && phase_ == Phase::Sweep) {
        // The buffer rolls straight through corners (continuous perimeter
        // scan); each average belongs to the edge its center position lies
        // nearest, a corner tie going to the edge traversed earlier.
        const EnuPoint c = to_enu(avg->center_pos, origin_);
        const EnuPoint sw = to_enu(rect_corner(rect_, 0), origin_);
        const EnuPoint ne = to_enu(rect_corner(rect_, 2), origin_);
        const double d[4] = {std::abs(c.y - sw.y), std::abs(c.x - ne.x), std::abs(c.y - ne.y),
                             std::abs(c.x - sw.x)};
        int edge = start_corner_;
        double best_d = std::numeric_limits<double>::infinity();
        for (int l = 0; l < 4; ++l) {  // traversal order, so earlier edges win ties
            const int e = (start_corner_ + l) % 4;
            if (d[e] < best_d - 1e-9) {
                best_d = d[e];
                edge = e;
            }
        }
        auto& best = edge_best_[static_cast<size_t>(edge)];
        if (!best || avg->avg_rssi_dbm > best->rssi_dbm) {
            best = EdgeBest{avg->avg_rssi_dbm, avg->center_pos};
        }
        if (!sweep_best_ || avg->avg_rssi_dbm > sweep_best_->rssi_dbm) {
            sweep_best_ = EdgeBest{avg->avg_rssi_dbm, avg->center_pos};
        }
        dec.sample_accepted = true;
    }

    if (!started_) {
        started_ = true;
        target_ = uav.pos;
        int entry = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < 4; ++c) {
            const double d = horizontal_distance(rect_corner(rect_, c), uav.pos);
            if (d < best_d) {
                best_d = d;
                entry = c;
            }
        }
        start_corner_ = entry;
        command_corner(dec, entry, true);
        return dec;
    }

    if (phase_ == Phase::Hold) return dec;
    if (distance_3d(uav.pos, target_) > kDefaultWaypointTolM) return dec;

    switch (phase_) {
        case Phase::Approach:
        case Phase::Descend:
            phase_ = Phase::Sweep;
            leg_ = 0;
            buffer_.clear();
            command_corner(dec, (start_corner_ + 1) % 4, false);
            break;
        case Phase::Sweep:
            leg_ += 1;
            if (leg_ < 4) {
                command_corner(dec, (start_corner_ + leg_ + 1) % 4, false);
            } else {
                complete_sweep(uav, dec);
            }
            break;
        case Phase::Hold:
            break;
    }
    return dec;
}

} // namespace afar
